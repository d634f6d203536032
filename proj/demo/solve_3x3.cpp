// Solves the 3x3 problem with rhs (0, 1/sqrt2, 1/2, 1/2) at three precisions and
// prints the quantum and classical solutions side by side.

#include "qpoisson/qpoisson.hpp"

#include <cstdio>

int main()
{
    using namespace qpoisson;
    const auto problem = reference_rhs(4);
    for (int bits : {0, 4, 8}) {
        hhl::HhlConfig config;
        config.frac_bits = bits;
        const auto r = hhl::run_hhl(problem, config);
        std::printf("f=%d  m=%d  qubits=%d  P(success)=%.6f  fidelity=%.10f  max rel err=%.3e\n", bits, r.layout.m,
                    r.layout.total_qubits(), r.success_probability, r.state_fidelity, r.errors.max_relative_error);
        for (std::size_t k = 0; k < r.solution.size(); ++k)
            std::printf("   v[%zu]  quantum %.6f  classical %.6f\n", k + 1, r.solution[k], r.classical_reference[k]);
    }
    return 0;
}
