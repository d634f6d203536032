#pragma once

#include "qpoisson/errors.hpp"
#include "qpoisson/state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace qpoisson::sim {

using Matrix2 = Eigen::Matrix2cd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kUnitaryTolerance = 1e-12;

namespace mat {

inline Matrix2 identity() { return Matrix2::Identity(); }

inline Matrix2 hadamard()
{
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix2 m;
    m << r, r, r, -r;
    return m;
}

inline Matrix2 pauli_x()
{
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix2 pauli_y()
{
    Matrix2 m;
    m << 0, amplitude(0, -1), amplitude(0, 1), 0;
    return m;
}

inline Matrix2 pauli_z()
{
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

/// Ry(angle)|0> = cos(angle/2)|0> + sin(angle/2)|1>.
inline Matrix2 ry(double angle)
{
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    Matrix2 m;
    m << c, -s, s, c;
    return m;
}

/// diag(1, e^{i angle}).
inline Matrix2 phase(double angle)
{
    Matrix2 m;
    m << 1, 0, 0, std::polar(1.0, angle);
    return m;
}

inline Matrix2 t_gate() { return phase(std::numbers::pi / 4.0); }

/// Index 0..3 -> I, X, Y, Z.
inline Matrix2 pauli(int index)
{
    switch (index) {
    case 0: return identity();
    case 1: return pauli_x();
    case 2: return pauli_y();
    case 3: return pauli_z();
    default: throw ValidationError("pauli index must be 0..3");
    }
}

inline Matrix swap()
{
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
}

} // namespace mat

/// max_ij |(U^dagger U - I)_ij|
inline double unitarity_defect(const Matrix& u)
{
    if (u.rows() != u.cols())
        return std::numeric_limits<double>::infinity();
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

enum class GateKind {
    SingleQubit,
    ControlledSingleQubit,
    ControlledDense,
    XorLookup,
    QftBlock,
    MultiplexedRy,
};

inline const char* to_string(GateKind k)
{
    switch (k) {
    case GateKind::SingleQubit: return "single_qubit";
    case GateKind::ControlledSingleQubit: return "controlled_single_qubit";
    case GateKind::ControlledDense: return "controlled_dense";
    case GateKind::XorLookup: return "xor_lookup";
    case GateKind::QftBlock: return "qft_block";
    case GateKind::MultiplexedRy: return "multiplexed_ry";
    }
    return "?";
}

/// 2x2 unitary on `target`, conditioned on every control being |1>.
struct QubitGate {
    std::vector<int> controls;
    int target = 0;
    Matrix2 u;
};

/// 2^w x 2^w unitary on `targets` (targets[0] is the LSB of the local index).
struct DenseGate {
    std::vector<int> controls;
    std::vector<int> targets;
    Matrix u;
};

/// |y>_src |a>_dst -> |y>_src |a XOR table[y]>_dst.
struct LookupGate {
    QubitRange source;
    QubitRange dest;
    std::vector<std::uint64_t> table;
};

/// Quantum Fourier transform on a register, F|x> = 2^{-w/2} sum_y e^{2 pi i x y / 2^w} |y>,
/// or its inverse.
struct QftGate {
    QubitRange reg;
    bool inverse = true;
};

/// Uniformly controlled Ry: the target sees Ry(angles[y]) when `select` holds y.
struct MultiplexedRyGate {
    QubitRange select;
    int target = 0;
    std::vector<double> angles;
};

class GateOp {
public:
    using Payload = std::variant<QubitGate, DenseGate, LookupGate, QftGate, MultiplexedRyGate>;

    static GateOp single(int target, const Matrix2& u) { return controlled({}, target, u); }

    static GateOp controlled(std::vector<int> controls, int target, const Matrix2& u)
    {
        detail::require(unitarity_defect(u) <= kUnitaryTolerance, "gate matrix is not unitary");
        check_disjoint(controls, {target});
        return GateOp(QubitGate{std::move(controls), target, u});
    }

    static GateOp dense(std::vector<int> controls, std::vector<int> targets, Matrix u)
    {
        detail::require(!targets.empty(), "dense gate needs at least one target");
        detail::require(u.rows() == (Eigen::Index{1} << targets.size()), "dense gate matrix size must be 2^targets");
        detail::require(unitarity_defect(u) <= kUnitaryTolerance, "gate matrix is not unitary");
        check_disjoint(controls, targets);
        return GateOp(DenseGate{std::move(controls), std::move(targets), std::move(u)});
    }

    static GateOp xor_lookup(QubitRange source, QubitRange dest, std::vector<std::uint64_t> table)
    {
        detail::require(source.width >= 1 && dest.width >= 1 && source.offset >= 0 && dest.offset >= 0,
                        "lookup registers must be non-empty");
        detail::require(!source.overlaps(dest), "lookup source and destination overlap");
        detail::require(table.size() == source.size(), "lookup table must define every source value");
        for (auto v : table)
            detail::require(v < dest.size(), "lookup value does not fit the destination register");
        return GateOp(LookupGate{source, dest, std::move(table)});
    }

    static GateOp qft(QubitRange reg, bool inverse)
    {
        detail::require(reg.width >= 1 && reg.offset >= 0, "qft register must be non-empty");
        return GateOp(QftGate{reg, inverse});
    }

    static GateOp multiplexed_ry(QubitRange select, int target, std::vector<double> angles)
    {
        detail::require(select.width >= 1 && select.offset >= 0, "select register must be non-empty");
        detail::require(!select.contains(target), "multiplexor target lies in its select register");
        detail::require(angles.size() == select.size(), "multiplexor needs one angle per select value");
        return GateOp(MultiplexedRyGate{select, target, std::move(angles)});
    }

    GateKind kind() const
    {
        return std::visit(
            [](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, QubitGate>)
                    return g.controls.empty() ? GateKind::SingleQubit : GateKind::ControlledSingleQubit;
                else if constexpr (std::is_same_v<T, DenseGate>)
                    return GateKind::ControlledDense;
                else if constexpr (std::is_same_v<T, LookupGate>)
                    return GateKind::XorLookup;
                else if constexpr (std::is_same_v<T, QftGate>)
                    return GateKind::QftBlock;
                else
                    return GateKind::MultiplexedRy;
            },
            payload_);
    }

    const Payload& payload() const { return payload_; }

    /// Every qubit the gate touches, controls included.
    std::vector<int> qubits() const
    {
        std::vector<int> out;
        auto add_range = [&](const QubitRange& r) {
            for (int q = r.offset; q < r.end(); ++q)
                out.push_back(q);
        };
        std::visit(
            [&](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, QubitGate>) {
                    out = g.controls;
                    out.push_back(g.target);
                } else if constexpr (std::is_same_v<T, DenseGate>) {
                    out = g.controls;
                    out.insert(out.end(), g.targets.begin(), g.targets.end());
                } else if constexpr (std::is_same_v<T, LookupGate>) {
                    add_range(g.source);
                    add_range(g.dest);
                } else if constexpr (std::is_same_v<T, QftGate>) {
                    add_range(g.reg);
                } else {
                    add_range(g.select);
                    out.push_back(g.target);
                }
            },
            payload_);
        return out;
    }

    GateOp inverse() const
    {
        return std::visit(
            [](const auto& g) -> GateOp {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, QubitGate>)
                    return GateOp(QubitGate{g.controls, g.target, g.u.adjoint()});
                else if constexpr (std::is_same_v<T, DenseGate>)
                    return GateOp(DenseGate{g.controls, g.targets, g.u.adjoint()});
                else if constexpr (std::is_same_v<T, LookupGate>)
                    return GateOp(g);
                else if constexpr (std::is_same_v<T, QftGate>)
                    return GateOp(QftGate{g.reg, !g.inverse});
                else {
                    auto angles = g.angles;
                    for (auto& a : angles)
                        a = -a;
                    return GateOp(MultiplexedRyGate{g.select, g.target, std::move(angles)});
                }
            },
            payload_);
    }

private:
    explicit GateOp(Payload p) : payload_(std::move(p)) {}

    static void check_disjoint(const std::vector<int>& controls, const std::vector<int>& targets)
    {
        std::vector<int> all = controls;
        all.insert(all.end(), targets.begin(), targets.end());
        for (int q : all)
            detail::require(q >= 0, "negative qubit index");
        std::sort(all.begin(), all.end());
        detail::require(std::adjacent_find(all.begin(), all.end()) == all.end(),
                        "gate controls and targets must be distinct qubits");
    }

    Payload payload_;
};

/// Gate-level QFT on `reg` with the LSB-first register convention: Hadamards,
/// controlled phases 2 pi / 2^(j-k+1), then a bit-reversal of swaps.
inline std::vector<GateOp> qft_gates(const QubitRange& reg, bool inverse)
{
    std::vector<GateOp> gates;
    const int w = reg.width;
    for (int j = w - 1; j >= 0; --j) {
        gates.push_back(GateOp::single(reg.offset + j, mat::hadamard()));
        for (int k = j - 1; k >= 0; --k) {
            const double angle = 2.0 * std::numbers::pi / static_cast<double>(std::uint64_t{1} << (j - k + 1));
            gates.push_back(GateOp::controlled({reg.offset + k}, reg.offset + j, mat::phase(angle)));
        }
    }
    for (int j = 0; j < w / 2; ++j)
        gates.push_back(GateOp::dense({}, {reg.offset + j, reg.offset + w - 1 - j}, mat::swap()));
    if (!inverse)
        return gates;
    std::vector<GateOp> inv;
    inv.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
        inv.push_back(it->inverse());
    return inv;
}

} // namespace qpoisson::sim
