#pragma once

// Dense statevector. Qubit 0 is the least-significant bit of the basis index,
// and a register's value is read with its lowest qubit as the LSB.

#include "qpoisson/errors.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qpoisson::sim {

using amplitude = std::complex<double>;

/// Contiguous block of qubits [offset, offset + width).
struct QubitRange {
    int offset = 0;
    int width = 0;

    int end() const { return offset + width; }
    std::uint64_t size() const { return std::uint64_t{1} << width; }
    std::uint64_t mask() const { return (size() - 1) << offset; }
    std::uint64_t value_of(std::uint64_t basis_index) const { return (basis_index >> offset) & (size() - 1); }
    bool contains(int q) const { return q >= offset && q < end(); }
    bool overlaps(const QubitRange& other) const { return offset < other.end() && other.offset < end(); }

    bool operator==(const QubitRange&) const = default;
};

class QuantumState {
public:
    /// All qubits in |0>.
    explicit QuantumState(int num_qubits) : num_qubits_(num_qubits)
    {
        detail::require(num_qubits >= 1 && num_qubits <= 40, "qubit count out of range");
        amps_.assign(std::size_t{1} << num_qubits, amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    /// Takes ownership of an explicit amplitude vector (length 2^k, unit norm).
    static QuantumState from_amplitudes(std::vector<amplitude> amps, double tolerance = 1e-10)
    {
        const auto size = static_cast<long long>(amps.size());
        detail::require(size >= 2 && detail::is_power_of_two(size), "amplitude count must be 2^k, k >= 1");
        QuantumState s(1);
        s.num_qubits_ = detail::log2_exact(size);
        s.amps_ = std::move(amps);
        detail::require(std::abs(s.norm_squared() - 1.0) <= tolerance, "amplitudes are not normalized");
        return s;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const amplitude> amplitudes() const { return amps_; }
    std::span<amplitude> amplitudes() { return amps_; }
    const amplitude& operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const
    {
        double acc = 0.0;
        for (const auto& a : amps_)
            acc += std::norm(a);
        return acc;
    }

    void check_range(const QubitRange& r) const
    {
        detail::require(r.offset >= 0 && r.width >= 1 && r.end() <= num_qubits_,
                        "register range out of bounds for " + std::to_string(num_qubits_) + "-qubit state");
    }

private:
    int num_qubits_ = 0;
    std::vector<amplitude> amps_;
};

struct RegisterAssignment {
    QubitRange range;
    std::vector<amplitude> amplitudes;
};

/// Product state of the given register assignments; unassigned qubits are |0>.
inline QuantumState init_state(int num_qubits, std::span<const RegisterAssignment> assignments, double tolerance = 1e-10)
{
    QuantumState state(num_qubits);
    std::uint64_t used = 0;
    for (const auto& a : assignments) {
        state.check_range(a.range);
        detail::require(a.amplitudes.size() == a.range.size(), "assignment length must be 2^width of its range");
        detail::require((used & a.range.mask()) == 0, "register assignments overlap");
        used |= a.range.mask();
        double norm = 0.0;
        for (const auto& v : a.amplitudes)
            norm += std::norm(v);
        detail::require(std::abs(norm - 1.0) <= tolerance, "register assignment is not normalized");
    }
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & ~used) {
            amps[i] = 0.0;
            continue;
        }
        amplitude v = 1.0;
        for (const auto& a : assignments)
            v *= a.amplitudes[a.range.value_of(i)];
        amps[i] = v;
    }
    return state;
}

inline QuantumState init_state(int num_qubits, std::initializer_list<RegisterAssignment> assignments)
{
    return init_state(num_qubits, std::span<const RegisterAssignment>(assignments.begin(), assignments.size()));
}

struct PostSelection {
    QuantumState state;
    double probability;
};

/// Conditions `state` on `qubit` reading `outcome` and renormalizes.
/// Throws ZeroProbability when the outcome probability is <= min_probability.
inline PostSelection post_select(const QuantumState& state, int qubit, int outcome, double min_probability = 0.0)
{
    detail::require(qubit >= 0 && qubit < state.num_qubits(), "post-selection qubit out of range");
    detail::require(outcome == 0 || outcome == 1, "outcome must be 0 or 1");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const std::uint64_t want = outcome ? bit : 0;
    const auto in = state.amplitudes();
    double p = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i)
        if ((i & bit) == want)
            p += std::norm(in[i]);
    if (!(p > min_probability))
        throw ZeroProbability("post-selection outcome has zero probability; the algorithm has to be restarted");
    std::vector<amplitude> out(in.size(), amplitude{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(p);
    for (std::size_t i = 0; i < in.size(); ++i)
        if ((i & bit) == want)
            out[i] = in[i] * scale;
    return {QuantumState::from_amplitudes(std::move(out), 1e-8), p};
}

/// Probability of each register value, summed over all other qubits.
inline std::vector<double> marginal_distribution(const QuantumState& state, const QubitRange& reg)
{
    state.check_range(reg);
    std::vector<double> out(reg.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        out[reg.value_of(i)] += std::norm(amps[i]);
    return out;
}

/// Amplitudes over `reg` with every other qubit pinned: (index & fixed_mask) == fixed_value,
/// where fixed_mask must cover all qubits outside `reg`. Not renormalized.
inline std::vector<amplitude> slice_amplitudes(const QuantumState& state, const QubitRange& reg, std::uint64_t fixed_mask,
                                               std::uint64_t fixed_value)
{
    state.check_range(reg);
    detail::require((fixed_mask & reg.mask()) == 0, "slice register overlaps the fixed qubits");
    const std::uint64_t all = (std::uint64_t{1} << state.num_qubits()) - 1;
    detail::require((fixed_mask | reg.mask()) == all, "slice must pin every qubit outside the register");
    std::vector<amplitude> out(reg.size(), amplitude{0.0, 0.0});
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        if ((i & fixed_mask) == fixed_value)
            out[reg.value_of(i)] = amps[i];
    return out;
}

} // namespace qpoisson::sim
