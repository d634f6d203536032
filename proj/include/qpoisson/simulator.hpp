#pragma once

#include "qpoisson/gates.hpp"
#include "qpoisson/state.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace qpoisson::sim {

namespace kernel {

inline std::uint64_t bit_mask(std::span<const int> qubits)
{
    std::uint64_t m = 0;
    for (int q : qubits)
        m |= std::uint64_t{1} << q;
    return m;
}

inline void check_qubits(const QuantumState& state, std::span<const int> qubits)
{
    for (int q : qubits)
        detail::require(q >= 0 && q < state.num_qubits(), "gate qubit index out of range");
}

inline void apply_qubit_gate(QuantumState& state, const QubitGate& g)
{
    const std::uint64_t t = std::uint64_t{1} << g.target;
    const std::uint64_t cmask = bit_mask(g.controls);
    const amplitude u00 = g.u(0, 0), u01 = g.u(0, 1), u10 = g.u(1, 0), u11 = g.u(1, 1);
    auto amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & t) || (i & cmask) != cmask)
            continue;
        const amplitude a0 = amps[i];
        const amplitude a1 = amps[i | t];
        amps[i] = u00 * a0 + u01 * a1;
        amps[i | t] = u10 * a0 + u11 * a1;
    }
}

inline void apply_dense_gate(QuantumState& state, const DenseGate& g)
{
    const std::size_t local_dim = std::size_t{1} << g.targets.size();
    std::vector<std::uint64_t> offsets(local_dim, 0);
    for (std::size_t local = 0; local < local_dim; ++local)
        for (std::size_t r = 0; r < g.targets.size(); ++r)
            if (local & (std::size_t{1} << r))
                offsets[local] |= std::uint64_t{1} << g.targets[r];
    const std::uint64_t tmask = bit_mask(g.targets);
    const std::uint64_t cmask = bit_mask(g.controls);
    std::vector<amplitude> in(local_dim);
    auto amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    for (std::uint64_t base = 0; base < dim; ++base) {
        if ((base & tmask) || (base & cmask) != cmask)
            continue;
        for (std::size_t c = 0; c < local_dim; ++c)
            in[c] = amps[base | offsets[c]];
        for (std::size_t r = 0; r < local_dim; ++r) {
            amplitude acc = 0.0;
            for (std::size_t c = 0; c < local_dim; ++c)
                acc += g.u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
            amps[base | offsets[r]] = acc;
        }
    }
}

inline void apply_lookup(QuantumState& state, const LookupGate& g)
{
    state.check_range(g.source);
    state.check_range(g.dest);
    auto amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        const std::uint64_t j = i ^ (g.table[g.source.value_of(i)] << g.dest.offset);
        if (i < j)
            std::swap(amps[i], amps[j]);
    }
}

inline void apply_multiplexed_ry(QuantumState& state, const MultiplexedRyGate& g)
{
    state.check_range(g.select);
    std::vector<std::array<double, 2>> cs(g.angles.size());
    for (std::size_t y = 0; y < g.angles.size(); ++y)
        cs[y] = {std::cos(g.angles[y] / 2.0), std::sin(g.angles[y] / 2.0)};
    const std::uint64_t t = std::uint64_t{1} << g.target;
    auto amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & t)
            continue;
        const auto [c, s] = cs[g.select.value_of(i)];
        const amplitude a0 = amps[i];
        const amplitude a1 = amps[i | t];
        amps[i] = c * a0 - s * a1;
        amps[i | t] = s * a0 + c * a1;
    }
}

} // namespace kernel

/// Applies `gate` in place. Norm is preserved up to rounding.
inline void apply(QuantumState& state, const GateOp& gate)
{
    const auto qubits = gate.qubits();
    kernel::check_qubits(state, qubits);
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, QubitGate>)
                kernel::apply_qubit_gate(state, g);
            else if constexpr (std::is_same_v<T, DenseGate>)
                kernel::apply_dense_gate(state, g);
            else if constexpr (std::is_same_v<T, LookupGate>)
                kernel::apply_lookup(state, g);
            else if constexpr (std::is_same_v<T, QftGate>) {
                for (const auto& sub : qft_gates(g.reg, g.inverse))
                    apply(state, sub);
            } else
                kernel::apply_multiplexed_ry(state, g);
        },
        gate.payload());
}

inline void apply_xor_lookup(QuantumState& state, const QubitRange& source, const QubitRange& dest,
                             std::vector<std::uint64_t> table)
{
    apply(state, GateOp::xor_lookup(source, dest, std::move(table)));
}

inline void inverse_qft(QuantumState& state, const QubitRange& reg)
{
    state.check_range(reg);
    apply(state, GateOp::qft(reg, true));
}

inline void qft(QuantumState& state, const QubitRange& reg)
{
    state.check_range(reg);
    apply(state, GateOp::qft(reg, false));
}

/// Ordered gate list over a fixed number of qubits.
class Circuit {
public:
    explicit Circuit(int num_qubits) : num_qubits_(num_qubits)
    {
        detail::require(num_qubits >= 1, "circuit needs at least one qubit");
    }

    Circuit& add(GateOp gate)
    {
        for (int q : gate.qubits())
            detail::require(q < num_qubits_, "gate references qubit outside the circuit");
        ops_.push_back(std::move(gate));
        return *this;
    }

    Circuit& append(const Circuit& other)
    {
        detail::require(other.num_qubits_ == num_qubits_, "circuit width mismatch");
        ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
        return *this;
    }

    Circuit inverse() const
    {
        Circuit out(num_qubits_);
        for (auto it = ops_.rbegin(); it != ops_.rend(); ++it)
            out.ops_.push_back(it->inverse());
        return out;
    }

    int num_qubits() const { return num_qubits_; }
    std::span<const GateOp> ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }

private:
    int num_qubits_;
    std::vector<GateOp> ops_;
};

inline void apply(QuantumState& state, const Circuit& circuit)
{
    detail::require(circuit.num_qubits() == state.num_qubits(), "circuit and state widths differ");
    for (const auto& op : circuit.ops())
        apply(state, op);
}

} // namespace qpoisson::sim
