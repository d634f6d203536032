#pragma once

#include "qpoisson/hhl.hpp"
#include "qpoisson/poisson.hpp"

#include <functional>
#include <vector>

namespace qpoisson::analysis {

struct ScalingRow {
    int grid = 0;
    double kappa = 0.0;
    double success_probability = 0.0;
    double p_kappa_squared = 0.0;
};

using RhsFactory = std::function<PoissonProblem(int)>;

/// P(ancilla = 1) against the condition number for each grid size. The default rhs has
/// equal overlap with every eigenvector.
inline std::vector<ScalingRow> success_scaling(const std::vector<int>& grids, const hhl::HhlConfig& config,
                                               const RhsFactory& make_rhs = flat_overlap_rhs)
{
    std::vector<ScalingRow> rows;
    for (int N : grids) {
        const auto problem = make_rhs(N);
        const auto result = hhl::run_hhl(problem, config);
        const double kappa = condition_number(eigenpairs(N));
        rows.push_back({N, kappa, result.success_probability, result.success_probability * kappa * kappa});
    }
    return rows;
}

/// max / min of P * kappa^2 over the rows.
inline double scaling_spread(const std::vector<ScalingRow>& rows)
{
    detail::require(!rows.empty(), "no scaling rows");
    double lo = rows.front().p_kappa_squared;
    double hi = lo;
    for (const auto& r : rows) {
        lo = std::min(lo, r.p_kappa_squared);
        hi = std::max(hi, r.p_kappa_squared);
    }
    return hi / lo;
}

} // namespace qpoisson::analysis
