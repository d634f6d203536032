#pragma once

// HHL circuit for the 1-D Poisson problem:
//
//   prepare |b>_B -> QPE(B, E) -> lookup omega into A -> controlled Ry on ancilla
//                 -> undo lookup -> QPE^dagger -> post-select ancilla = |1>
//
// Register E holds the eigenvalue estimate y = lambda * 2^(f+i) in fixed point
// (2n+2 integer bits, f fractional bits, i extra amplification bits). The
// rotation always uses the de-amplified value y / 2^(f+i), so sin(theta) = 1/lambda.

#include "qpoisson/errors.hpp"
#include "qpoisson/metrics.hpp"
#include "qpoisson/poisson.hpp"
#include "qpoisson/simulator.hpp"
#include "qpoisson/state.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace qpoisson::hhl {

using sim::QubitRange;
using sim::QuantumState;

enum class RotationMode {
    Faithful, ///< omega written into register A, one controlled Ry per A bit
    Compact,  ///< multiplexed Ry keyed directly on register E, unquantized omega
};

inline const char* to_string(RotationMode m) { return m == RotationMode::Faithful ? "faithful" : "compact"; }

inline RotationMode parse_mode(const std::string& s)
{
    if (s == "faithful")
        return RotationMode::Faithful;
    if (s == "compact")
        return RotationMode::Compact;
    throw ValidationError("mode must be 'faithful' or 'compact'");
}

struct FixedPointFormat {
    int int_bits = 0;
    int frac_bits = 0;
    int amp_exponent = 0;

    int width() const { return int_bits + frac_bits + amp_exponent; }
    /// 2^(f+i): register value per unit eigenvalue.
    double scale() const { return std::ldexp(1.0, frac_bits + amp_exponent); }
    double decode(std::uint64_t y) const { return static_cast<double>(y) / scale(); }
};

struct RegisterLayout {
    int grid = 0; ///< N
    int n = 0;    ///< register B width
    int m = 0;    ///< register E width
    int l = 0;    ///< register A width (0 in compact mode)
    RotationMode mode = RotationMode::Compact;
    FixedPointFormat format;

    QubitRange reg_b() const { return {0, n}; }
    QubitRange reg_e() const { return {n, m}; }
    QubitRange reg_a() const { return {n + m, l}; }
    int ancilla() const { return n + m + l; }
    int total_qubits() const { return n + m + l + 1; }
};

struct HhlConfig {
    int frac_bits = 0;
    int amp_exponent = 0;
    int reg_a_bits = 0; ///< raised to m in faithful mode
    RotationMode mode = RotationMode::Compact;
    int qubit_budget = 30;
    double min_success_probability = 1e-14;
};

inline RegisterLayout layout_registers(int N, const HhlConfig& config)
{
    validate_grid(N);
    detail::require(config.frac_bits >= 0 && config.amp_exponent >= 0, "frac-bits and amp must be non-negative");
    detail::require(config.reg_a_bits >= 0, "reg-a-bits must be non-negative");
    RegisterLayout layout;
    layout.grid = N;
    layout.n = detail::log2_exact(N);
    layout.format = {2 * layout.n + 2, config.frac_bits, config.amp_exponent};
    layout.m = layout.format.width();
    layout.mode = config.mode;
    layout.l = config.mode == RotationMode::Faithful ? std::max(config.reg_a_bits, layout.m) : 0;
    if (layout.total_qubits() > config.qubit_budget)
        throw BudgetExceeded("layout needs " + std::to_string(layout.total_qubits()) + " qubits, budget is " +
                             std::to_string(config.qubit_budget));
    return layout;
}

/// N x N operator acting as A on basis states 1..N-1 and as 0 on basis state 0.
inline Eigen::MatrixXd embed_operator(int N)
{
    const auto A = build_matrix(N).dense();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
    out.bottomRightCorner(N - 1, N - 1) = A;
    return out;
}

/// Hamiltonian-simulation step t0 = 2 pi / 2^(2n+2); eigenphase lambda t0 / 2 pi < 1.
inline double time_step(const RegisterLayout& layout) { return 2.0 * std::numbers::pi / std::ldexp(1.0, 2 * layout.n + 2); }

/// exp(i * embed_operator * t0 * 2^power), assembled from the closed-form spectrum.
inline sim::Matrix evolution_power(const SpectralData& spectral, const RegisterLayout& layout, int power)
{
    const int N = spectral.grid;
    sim::Matrix u = sim::Matrix::Zero(N, N);
    u(0, 0) = 1.0;
    for (int j = 1; j < N; ++j) {
        // fraction of a full turn, reduced before scaling by 2 pi to keep the phase exact
        const double turns = std::ldexp(spectral.lambdas[j - 1], power - (2 * layout.n + 2));
        const auto phase = std::polar(1.0, 2.0 * std::numbers::pi * (turns - std::floor(turns)));
        const auto v = spectral.embedded_eigenvector(j);
        for (int r = 1; r < N; ++r)
            for (int c = 1; c < N; ++c)
                u(r, c) += phase * v[r] * v[c];
    }
    return u;
}

/// theta / pi with sin(theta) = 1/lambda; zero for lambda <= 1.
inline double angular_coefficient(double lambda)
{
    if (!(lambda > 1.0))
        return 0.0;
    return std::atan2(1.0, std::sqrt(lambda * lambda - 1.0)) / std::numbers::pi;
}

struct OmegaTable {
    std::vector<double> omega;        ///< indexed by register-E value
    std::vector<std::uint64_t> fixed; ///< l-bit fixed point, faithful mode only
    int frac_bits = 0;                ///< l

    double quantized(std::uint64_t y) const { return std::ldexp(static_cast<double>(fixed[y]), -frac_bits); }
};

inline OmegaTable build_omega_table(const RegisterLayout& layout)
{
    OmegaTable table;
    const std::uint64_t size = layout.reg_e().size();
    table.omega.resize(size);
    for (std::uint64_t y = 0; y < size; ++y)
        table.omega[y] = angular_coefficient(layout.format.decode(y));
    if (layout.l > 0) {
        table.frac_bits = layout.l;
        const auto cap = std::uint64_t{1} << (layout.l - 1);
        table.fixed.resize(size);
        for (std::uint64_t y = 0; y < size; ++y) {
            const auto r = static_cast<std::uint64_t>(std::llround(std::ldexp(table.omega[y], layout.l)));
            table.fixed[y] = std::min(r, cap);
        }
    }
    return table;
}

/// Full Ry angles 2 pi omega(y) for the compact multiplexor. With `quantized`, the
/// l-bit values of a faithful table are used instead.
inline std::vector<double> rotation_angles(const OmegaTable& table, bool quantized = false)
{
    detail::require(!quantized || !table.fixed.empty(), "table has no fixed-point entries");
    std::vector<double> out(table.omega.size());
    for (std::size_t y = 0; y < out.size(); ++y)
        out[y] = 2.0 * std::numbers::pi * (quantized ? table.quantized(y) : table.omega[y]);
    return out;
}

// --- circuit stages ---

inline std::vector<int> register_qubits(const QubitRange& r)
{
    std::vector<int> out;
    for (int q = r.offset; q < r.end(); ++q)
        out.push_back(q);
    return out;
}

/// H on E, controlled-U^(2^k) from E qubit k onto B, inverse QFT on E.
inline sim::Circuit qpe_circuit(const RegisterLayout& layout, const SpectralData& spectral)
{
    sim::Circuit c(layout.total_qubits());
    const auto e = layout.reg_e();
    for (int k = 0; k < e.width; ++k)
        c.add(sim::GateOp::single(e.offset + k, sim::mat::hadamard()));
    const auto b_qubits = register_qubits(layout.reg_b());
    for (int k = 0; k < e.width; ++k)
        c.add(sim::GateOp::dense({e.offset + k}, b_qubits, evolution_power(spectral, layout, k)));
    c.add(sim::GateOp::qft(e, true));
    return c;
}

/// Writes omega into A (faithful) or leaves A untouched (compact), then rotates the ancilla.
inline sim::Circuit rotation_circuit(const RegisterLayout& layout, const OmegaTable& table)
{
    sim::Circuit c(layout.total_qubits());
    if (layout.mode == RotationMode::Compact) {
        c.add(sim::GateOp::multiplexed_ry(layout.reg_e(), layout.ancilla(), rotation_angles(table)));
        return c;
    }
    detail::require(table.frac_bits == layout.l && !table.fixed.empty(), "omega table does not match register A");
    c.add(sim::GateOp::xor_lookup(layout.reg_e(), layout.reg_a(), table.fixed));
    const auto a = layout.reg_a();
    for (int p = 0; p < a.width; ++p) {
        const double angle = 2.0 * std::numbers::pi * std::ldexp(1.0, p - layout.l);
        c.add(sim::GateOp::controlled({a.offset + p}, layout.ancilla(), sim::mat::ry(angle)));
    }
    return c;
}

/// Clears register A again (faithful mode); empty in compact mode.
inline sim::Circuit unlookup_circuit(const RegisterLayout& layout, const OmegaTable& table)
{
    sim::Circuit c(layout.total_qubits());
    if (layout.mode == RotationMode::Faithful)
        c.add(sim::GateOp::xor_lookup(layout.reg_e(), layout.reg_a(), table.fixed));
    return c;
}

inline QuantumState prepare(const PoissonProblem& problem, const RegisterLayout& layout)
{
    detail::require(problem.grid() == layout.grid, "problem size does not match layout");
    std::vector<sim::amplitude> b(problem.rhs().begin(), problem.rhs().end());
    const sim::RegisterAssignment assignment{layout.reg_b(), std::move(b)};
    return sim::init_state(layout.total_qubits(), std::span<const sim::RegisterAssignment>(&assignment, 1));
}

inline void qpe_forward(QuantumState& state, const RegisterLayout& layout, const SpectralData& spectral)
{
    sim::apply(state, qpe_circuit(layout, spectral));
}

inline void controlled_rotation(QuantumState& state, const RegisterLayout& layout, const OmegaTable& table)
{
    sim::apply(state, rotation_circuit(layout, table));
}

inline void uncompute(QuantumState& state, const RegisterLayout& layout, const OmegaTable& table,
                      const SpectralData& spectral)
{
    sim::apply(state, unlookup_circuit(layout, table));
    sim::apply(state, qpe_circuit(layout, spectral).inverse());
}

/// Every qubit outside register B: E, A and the ancilla.
inline std::uint64_t work_mask(const RegisterLayout& layout)
{
    const std::uint64_t all = (std::uint64_t{1} << layout.total_qubits()) - 1;
    return all & ~layout.reg_b().mask();
}

// --- end-to-end ---

struct HhlResult {
    RegisterLayout layout;
    std::vector<double> solution;            ///< normalized, basis states 1..N-1
    std::vector<double> classical_reference; ///< normalized Thomas solution
    analysis::ErrorReport errors;
    double success_probability = 0.0;  ///< P(ancilla = 1)
    double clean_probability = 0.0;    ///< P(ancilla = 1, E = A = 0)
    double state_fidelity = 0.0;
    std::vector<double> register_b_distribution; ///< reg-B marginal given ancilla = 1
    double uncompute_residual = 0.0;             ///< P(E, A != 0 | ancilla = 1)
    double work_register_entropy = 0.0;          ///< Shannon entropy (bits) of E,A given ancilla = 1
    double max_imaginary_residual = 0.0;
    double elapsed_ms = 0.0;
};

inline double shannon_entropy_bits(std::span<const double> p)
{
    double h = 0.0;
    for (double x : p)
        if (x > 0.0)
            h -= x * std::log2(x);
    return std::max(0.0, h);
}

/// Reads the result off an already post-selected state (ancilla = 1).
inline HhlResult extract_result(const QuantumState& selected, const RegisterLayout& layout,
                                const PoissonProblem& problem, double min_probability)
{
    HhlResult result;
    result.layout = layout;
    const int N = layout.grid;

    const auto b = layout.reg_b();
    const auto coherent =
        sim::slice_amplitudes(selected, b, work_mask(layout), std::uint64_t{1} << layout.ancilla());
    double clean = 0.0;
    for (const auto& a : coherent)
        clean += std::norm(a);
    result.uncompute_residual = std::max(0.0, 1.0 - clean);
    result.register_b_distribution = sim::marginal_distribution(selected, b);

    const int work_width = layout.m + layout.l;
    const auto work = sim::marginal_distribution(selected, QubitRange{layout.n, work_width});
    result.work_register_entropy = shannon_entropy_bits(work);

    double interior_norm = 0.0;
    for (int k = 1; k < N; ++k)
        interior_norm += std::norm(coherent[k]);
    if (!(interior_norm > min_probability))
        throw ZeroProbability("post-selected solution branch is empty; the algorithm has to be restarted");

    auto classical = solve_thomas(problem);
    const double cnorm = std::sqrt(std::inner_product(classical.begin(), classical.end(), classical.begin(), 0.0));
    for (double& v : classical)
        v /= cnorm;

    // align the global phase to the classical reference
    std::complex<double> overlap = 0.0;
    for (int k = 1; k < N; ++k)
        overlap += classical[k - 1] * coherent[k];
    const auto rotate = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : std::complex<double>(1.0);
    const double qnorm = std::sqrt(interior_norm);
    result.solution.resize(N - 1);
    for (int k = 1; k < N; ++k) {
        const auto v = coherent[k] * rotate / qnorm;
        result.solution[k - 1] = v.real();
        result.max_imaginary_residual = std::max(result.max_imaginary_residual, std::abs(v.imag()));
    }
    result.state_fidelity = std::min(1.0, std::abs(overlap) / qnorm);
    result.classical_reference = std::move(classical);
    result.errors = analysis::relative_errors(result.solution, result.classical_reference);
    return result;
}

/// prepare -> QPE -> rotation -> uncompute -> post-select(ancilla = 1).
inline HhlResult run_hhl(const PoissonProblem& problem, const HhlConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    const auto layout = layout_registers(problem.grid(), config);
    const auto spectral = eigenpairs(problem.grid());
    const auto table = build_omega_table(layout);

    auto state = prepare(problem, layout);
    qpe_forward(state, layout, spectral);
    controlled_rotation(state, layout, table);
    uncompute(state, layout, table, spectral);
    const auto selected = sim::post_select(state, layout.ancilla(), 1, config.min_success_probability);

    auto result = extract_result(selected.state, layout, problem, config.min_success_probability);
    result.success_probability = selected.probability;
    result.clean_probability = selected.probability * (1.0 - result.uncompute_residual);
    result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace qpoisson::hhl
