#pragma once

// Monte Carlo Pauli-trajectory noise: after every CNOT-equivalent two-qubit gate, with
// probability p a uniformly random non-identity two-qubit Pauli hits the gate's qubits.
//
// Gate-level lowering covers the QFT blocks and the compact rotation multiplexor. Each
// dense controlled-U block is simulated exactly and followed by as many independent
// depolarizing events as its CNOT-equivalent cost, each on a random qubit pair of the block.

#include "qpoisson/cost.hpp"
#include "qpoisson/hhl.hpp"
#include "qpoisson/simulator.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace qpoisson::analysis {

struct NoiseModel {
    double cnot_error_rate = 8.094e-2;
};

struct NoisyRunConfig {
    std::uint64_t trajectories = 1000;
    std::uint64_t seed = 0;
    int max_qubits = 20;
};

struct NoisyResult {
    std::vector<double> noisy_distribution;     ///< reg-B given ancilla = 1, trajectory-averaged
    std::vector<double> noiseless_distribution; ///< same readout without noise
    double leakage = 0.0;                       ///< noisy P(|0>_B)
    double noiseless_leakage = 0.0;
    double mean_success_probability = 0.0;
    std::uint64_t trajectories = 0;
    std::uint64_t error_events = 0; ///< Paulis actually inserted, all trajectories
};

/// One gate of the lowered program plus the depolarizing sites that follow it.
struct NoisyStep {
    sim::GateOp op;
    std::vector<std::array<int, 2>> pair_sites; ///< one event per listed pair
    std::vector<int> random_pool;               ///< pairs drawn from here ...
    std::uint64_t random_events = 0;            ///< ... this many times
};

namespace noise_detail {

inline void append_qft(std::vector<NoisyStep>& out, const sim::QubitRange& reg, bool inverse, const CostRules& rules)
{
    for (auto& g : sim::qft_gates(reg, inverse)) {
        NoisyStep step{g, {}, {}, 0};
        const auto qs = g.qubits();
        if (qs.size() == 2) {
            const auto repeats = g.kind() == sim::GateKind::ControlledSingleQubit ? rules.controlled_phase : rules.swap;
            step.pair_sites.assign(repeats, {qs[0], qs[1]});
        }
        out.push_back(std::move(step));
    }
}

inline void append_dense_blocks(std::vector<NoisyStep>& out, const hhl::RegisterLayout& layout,
                                const SpectralData& spectral, bool inverse, const CostRules& rules)
{
    const auto e = layout.reg_e();
    const auto b_qubits = hhl::register_qubits(layout.reg_b());
    const auto events = rules.dense(layout.n + 1);
    for (int i = 0; i < e.width; ++i) {
        const int k = inverse ? e.width - 1 - i : i;
        auto g = sim::GateOp::dense({e.offset + k}, b_qubits, hhl::evolution_power(spectral, layout, k));
        std::vector<int> pool = b_qubits;
        pool.push_back(e.offset + k);
        out.push_back({inverse ? g.inverse() : g, {}, std::move(pool), events});
    }
}

inline void append_hadamards(std::vector<NoisyStep>& out, const sim::QubitRange& reg)
{
    for (int q = reg.offset; q < reg.end(); ++q)
        out.push_back({sim::GateOp::single(q, sim::mat::hadamard()), {}, {}, 0});
}

/// Raw 64-bit draws mapped by hand so results do not depend on the standard library's
/// distribution implementations.
class TrajectoryRng {
public:
    TrajectoryRng(std::uint64_t seed, std::uint64_t index)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        engine_.seed(seq);
    }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

} // namespace noise_detail

/// Lowered compact-mode program: H, dense QPE blocks, gate-level inverse QFT, multiplexed
/// rotation, and the mirrored uncompute.
inline std::vector<NoisyStep> lower_for_noise(const hhl::RegisterLayout& layout, const SpectralData& spectral,
                                              const hhl::OmegaTable& table, const CostRules& rules = {})
{
    detail::require(layout.mode == hhl::RotationMode::Compact, "noisy trajectories require compact mode");
    using namespace noise_detail;
    std::vector<NoisyStep> steps;
    const auto e = layout.reg_e();

    append_hadamards(steps, e);
    append_dense_blocks(steps, layout, spectral, false, rules);
    append_qft(steps, e, true, rules);

    // Gray-code CNOT ladder of a uniformly controlled Ry: event k is controlled by the
    // select bit that flips between consecutive Gray codes.
    NoisyStep rot{sim::GateOp::multiplexed_ry(e, layout.ancilla(), hhl::rotation_angles(table)), {}, {}, 0};
    const auto events = rules.multi_controlled(layout.m);
    for (std::uint64_t k = 0; k < events; ++k) {
        const int bit = std::min(std::countr_zero(k + 1), layout.m - 1);
        rot.pair_sites.push_back({e.offset + bit, layout.ancilla()});
    }
    steps.push_back(std::move(rot));

    append_qft(steps, e, false, rules);
    append_dense_blocks(steps, layout, spectral, true, rules);
    append_hadamards(steps, e);
    return steps;
}

namespace noise_detail {

inline void apply_two_qubit_pauli(sim::QuantumState& state, int a, int b, std::uint64_t index)
{
    const int pa = static_cast<int>(index & 3);
    const int pb = static_cast<int>(index >> 2);
    if (pa != 0)
        sim::apply(state, sim::GateOp::single(a, sim::mat::pauli(pa)));
    if (pb != 0)
        sim::apply(state, sim::GateOp::single(b, sim::mat::pauli(pb)));
}

struct EventSink {
    TrajectoryRng& rng;
    double rate;
    std::uint64_t inserted = 0;

    void maybe_insert(sim::QuantumState& state, int a, int b)
    {
        if (!(rng.uniform() < rate))
            return;
        apply_two_qubit_pauli(state, a, b, 1 + rng.below(15));
        ++inserted;
    }
};

} // namespace noise_detail

/// Runs `trajectories` noisy copies of the compact pipeline and returns the reg-B
/// distribution conditioned on ancilla = 1. Trajectory t draws from its own stream
/// seeded by (seed, t); per-trajectory histograms are weighted by their ancilla-1
/// probability, which is how post-selected shots would pool.
inline NoisyResult noisy_trajectories(const PoissonProblem& problem, const hhl::HhlConfig& config,
                                      const NoiseModel& noise, const NoisyRunConfig& run, const CostRules& rules = {})
{
    detail::require(config.mode == hhl::RotationMode::Compact, "noisy trajectories require compact mode");
    detail::require(noise.cnot_error_rate >= 0.0 && noise.cnot_error_rate <= 1.0, "CNOT error rate must be in [0, 1]");
    detail::require(run.trajectories >= 1, "at least one trajectory is required");
    const auto layout = hhl::layout_registers(problem.grid(), config);
    if (layout.total_qubits() > run.max_qubits)
        throw BudgetExceeded("noisy runs are limited to " + std::to_string(run.max_qubits) + " qubits, layout needs " +
                             std::to_string(layout.total_qubits()));

    const auto spectral = eigenpairs(problem.grid());
    const auto table = hhl::build_omega_table(layout);
    const auto steps = lower_for_noise(layout, spectral, table, rules);
    const auto b = layout.reg_b();
    const std::uint64_t anc_bit = std::uint64_t{1} << layout.ancilla();

    NoisyResult result;
    result.trajectories = run.trajectories;
    std::vector<double> accum(b.size(), 0.0);
    double total_weight = 0.0;

    for (std::uint64_t t = 0; t < run.trajectories; ++t) {
        noise_detail::TrajectoryRng rng(run.seed, t);
        noise_detail::EventSink sink{rng, noise.cnot_error_rate};
        auto state = hhl::prepare(problem, layout);
        for (const auto& step : steps) {
            sim::apply(state, step.op);
            for (const auto& [qa, qb] : step.pair_sites)
                sink.maybe_insert(state, qa, qb);
            const auto pool = static_cast<std::uint64_t>(step.random_pool.size());
            for (std::uint64_t e = 0; e < step.random_events; ++e) {
                const auto i = rng.below(pool);
                auto j = rng.below(pool - 1);
                if (j >= i)
                    ++j;
                sink.maybe_insert(state, step.random_pool[i], step.random_pool[j]);
            }
        }
        const auto amps = state.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (!(i & anc_bit))
                continue;
            const double p = std::norm(amps[i]);
            accum[b.value_of(i)] += p;
            total_weight += p;
        }
        result.error_events += sink.inserted;
    }

    if (!(total_weight > 0.0))
        throw ZeroProbability("no trajectory reached the ancilla-1 outcome");
    for (double& v : accum)
        v /= total_weight;
    result.noisy_distribution = std::move(accum);
    result.leakage = result.noisy_distribution[0];
    result.mean_success_probability = total_weight / static_cast<double>(run.trajectories);

    const auto clean = hhl::run_hhl(problem, config);
    result.noiseless_distribution = clean.register_b_distribution;
    result.noiseless_leakage = clean.register_b_distribution[0];
    return result;
}

inline double total_variation(std::span<const double> p, std::span<const double> q)
{
    detail::require(p.size() == q.size(), "distributions differ in length");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

} // namespace qpoisson::analysis
