#include "qpoisson/simulator.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qpoisson;
using namespace qpoisson::sim;
using qpoisson::testkit::cd;

namespace {

std::vector<cd> copy(const QuantumState& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

QuantumState basis(int qubits, std::uint64_t index)
{
    std::vector<cd> v(std::size_t{1} << qubits, 0.0);
    v[index] = 1.0;
    return QuantumState::from_amplitudes(std::move(v));
}

} // namespace

TEST(State, StartsInZeroAndRejectsBadInput)
{
    QuantumState s(3);
    EXPECT_EQ(s.dim(), 8u);
    EXPECT_EQ(s[0], cd(1.0));
    EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
    EXPECT_THROW(QuantumState(0), ValidationError);
    EXPECT_THROW(QuantumState::from_amplitudes({1.0, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(QuantumState::from_amplitudes({1.0, 1.0}), ValidationError);
}

TEST(State, RegisterInitIsATensorProduct)
{
    const double r = 1.0 / std::sqrt(2.0);
    auto s = init_state(4, {{{0, 1}, {r, r}}, {{2, 2}, {0.0, 0.0, 1.0, 0.0}}});
    // qubit 0 in |+>, register [2,4) holds 2, qubit 1 is |0>
    EXPECT_NEAR(std::abs(s[0b1000]), r, 1e-15);
    EXPECT_NEAR(std::abs(s[0b1001]), r, 1e-15);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
    EXPECT_THROW(init_state(4, {{{0, 2}, {1.0, 0.0, 0.0, 0.0}}, {{1, 1}, {1.0, 0.0}}}), ValidationError);
    EXPECT_THROW(init_state(2, {{{0, 1}, {1.0, 1.0}}}), ValidationError);
    EXPECT_THROW(init_state(2, {{{1, 2}, {1.0, 0.0, 0.0, 0.0}}}), ValidationError);
}

TEST(State, PostSelectionAndMarginals)
{
    // (|00> + |11>) / sqrt 2 with a bias: 0.6|00> + 0.8|11>
    auto s = QuantumState::from_amplitudes({0.6, 0.0, 0.0, 0.8});
    const auto p = post_select(s, 1, 1);
    EXPECT_NEAR(p.probability, 0.64, 1e-15);
    EXPECT_NEAR(std::abs(p.state[3]), 1.0, 1e-15);
    const auto m = marginal_distribution(s, {0, 1});
    EXPECT_NEAR(m[0], 0.36, 1e-15);
    EXPECT_NEAR(m[1], 0.64, 1e-15);

    auto zero = QuantumState::from_amplitudes({1.0, 0.0, 0.0, 0.0});
    EXPECT_THROW(post_select(zero, 0, 1), ZeroProbability);
    EXPECT_THROW(post_select(s, 1, 1, 0.7), ZeroProbability);
}

TEST(State, SliceRequiresFullPinning)
{
    auto s = QuantumState::from_amplitudes({0.6, 0.0, 0.0, 0.8});
    const auto sl = slice_amplitudes(s, {0, 1}, 0b10, 0b10);
    EXPECT_EQ(sl[0], cd(0.0));
    EXPECT_EQ(sl[1], cd(0.8));
    QuantumState big(3);
    EXPECT_THROW(slice_amplitudes(big, {0, 1}, 0b010, 0), ValidationError);
    EXPECT_THROW(slice_amplitudes(big, {0, 2}, 0b110, 0), ValidationError);
}

TEST(Gates, MatricesAreUnitary)
{
    for (const auto& u : {mat::hadamard(), mat::pauli_x(), mat::pauli_y(), mat::pauli_z(), mat::ry(0.3), mat::phase(1.1),
                          mat::t_gate()})
        EXPECT_LE(unitarity_defect(u), 1e-15);
    EXPECT_LE(unitarity_defect(mat::swap()), 1e-15);
    // Ry(a)|0> = cos(a/2)|0> + sin(a/2)|1>
    const auto r = mat::ry(0.8);
    EXPECT_NEAR(r(0, 0).real(), std::cos(0.4), 1e-15);
    EXPECT_NEAR(r(1, 0).real(), std::sin(0.4), 1e-15);
    Matrix2 bad;
    bad << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(GateOp::single(0, bad), ValidationError);
    EXPECT_THROW(GateOp::controlled({1}, 1, mat::pauli_x()), ValidationError);
    EXPECT_THROW(GateOp::multiplexed_ry({0, 2}, 1, {0, 0, 0, 0}), ValidationError);
    EXPECT_THROW(GateOp::xor_lookup({0, 2}, {1, 2}, {0, 0, 0, 0}), ValidationError);
    EXPECT_THROW(GateOp::xor_lookup({0, 2}, {2, 1}, {0, 2, 0, 0}), ValidationError);
}

TEST(Gates, ControlledNotTruthTable)
{
    const auto cnot = GateOp::controlled({0}, 1, mat::pauli_x());
    for (std::uint64_t in = 0; in < 4; ++in) {
        auto s = basis(2, in);
        apply(s, cnot);
        const std::uint64_t expected = (in & 1) ? in ^ 2 : in;
        EXPECT_NEAR(std::abs(s[expected]), 1.0, 1e-15) << in;
    }
}

TEST(Gates, ToffoliFromSixCnotsMatchesDirectToffoli)
{
    using mat::hadamard;
    const auto T = mat::t_gate();
    const Matrix2 Td = T.adjoint();
    Circuit c(3);
    auto cx = [&](int a, int b) { c.add(GateOp::controlled({a}, b, mat::pauli_x())); };
    auto one = [&](int q, const Matrix2& u) { c.add(GateOp::single(q, u)); };
    one(2, hadamard());
    cx(1, 2);
    one(2, Td);
    cx(0, 2);
    one(2, T);
    cx(1, 2);
    one(2, Td);
    cx(0, 2);
    one(1, T);
    one(2, T);
    one(2, hadamard());
    cx(0, 1);
    one(0, T);
    one(1, Td);
    cx(0, 1);

    Circuit direct(3);
    direct.add(GateOp::controlled({0, 1}, 2, mat::pauli_x()));
    EXPECT_LE((testkit::unitary_of(c) - testkit::unitary_of(direct)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qft, MatchesDftMatrixAndInverse)
{
    for (int w = 1; w <= 5; ++w) {
        Circuit c(w);
        c.add(GateOp::qft({0, w}, false));
        const auto u = testkit::unitary_of(c);
        EXPECT_LE((u - testkit::dft_matrix(w)).cwiseAbs().maxCoeff(), 1e-12) << w;

        Circuit ci(w);
        ci.add(GateOp::qft({0, w}, true));
        EXPECT_LE((testkit::unitary_of(ci) - testkit::dft_matrix(w).adjoint()).cwiseAbs().maxCoeff(), 1e-12) << w;
    }
}

TEST(Qft, EmbeddedRegisterLeavesOtherQubitsAlone)
{
    std::mt19937_64 rng(7);
    auto s = testkit::random_state(rng, 5);
    const auto before = copy(s);
    qft(s, {1, 3});
    inverse_qft(s, {1, 3});
    EXPECT_LE(testkit::max_abs_diff(copy(s), before), 1e-12);
}

TEST(DenseGate, TargetOrderingIsLsbFirst)
{
    // permutation |x> -> |x+1 mod 4> on (q2, q0): q2 is the local LSB
    Matrix shift = Matrix::Zero(4, 4);
    for (int x = 0; x < 4; ++x)
        shift((x + 1) % 4, x) = 1.0;
    auto s = basis(3, 0b000);
    apply(s, GateOp::dense({}, {2, 0}, shift));
    EXPECT_NEAR(std::abs(s[0b100]), 1.0, 1e-15);
    apply(s, GateOp::dense({}, {2, 0}, shift));
    EXPECT_NEAR(std::abs(s[0b001]), 1.0, 1e-15);
}

TEST(DenseGate, ControlledMatchesBlockDiagonal)
{
    std::mt19937_64 rng(11);
    const auto u = testkit::random_unitary(rng, 4);
    Circuit c(3);
    c.add(GateOp::dense({2}, {0, 1}, u));
    const auto full = testkit::unitary_of(c);
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Identity(8, 8);
    expect.bottomRightCorner(4, 4) = u;
    EXPECT_LE((full - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MultiplexedRy, MatchesControlledRotations)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    std::vector<double> angles(4);
    for (auto& a : angles)
        a = angle(rng);
    Circuit mux(3);
    mux.add(GateOp::multiplexed_ry({0, 2}, 2, angles));
    Circuit ref(3);
    for (int y = 0; y < 4; ++y) {
        // flip zero bits so the pair of controls fires on value y
        for (int b = 0; b < 2; ++b)
            if (!(y >> b & 1))
                ref.add(GateOp::single(b, mat::pauli_x()));
        ref.add(GateOp::controlled({0, 1}, 2, mat::ry(angles[y])));
        for (int b = 0; b < 2; ++b)
            if (!(y >> b & 1))
                ref.add(GateOp::single(b, mat::pauli_x()));
    }
    EXPECT_LE((testkit::unitary_of(mux) - testkit::unitary_of(ref)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lookup, WritesTableAndIsAnInvolution)
{
    const std::vector<std::uint64_t> table = {3, 0, 5, 1};
    for (std::uint64_t y = 0; y < 4; ++y) {
        auto s = basis(5, y);
        apply_xor_lookup(s, {0, 2}, {2, 3}, table);
        EXPECT_NEAR(std::abs(s[y | table[y] << 2]), 1.0, 1e-15);
    }
    std::mt19937_64 rng(5);
    auto s = testkit::random_state(rng, 5);
    const auto before = copy(s);
    apply_xor_lookup(s, {0, 2}, {2, 3}, table);
    EXPECT_GT(testkit::max_abs_diff(copy(s), before), 1e-3);
    apply_xor_lookup(s, {0, 2}, {2, 3}, table);
    EXPECT_EQ(copy(s), before);
}

TEST(Circuit, RandomCircuitsPreserveNormAndInvert)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    const int q = 6;
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c(q);
        for (int g = 0; g < 30; ++g) {
            const int a = pick(rng);
            int b = pick(rng);
            if (b == a)
                b = (a + 1) % q;
            switch (g % 5) {
            case 0: c.add(GateOp::single(a, mat::ry(angle(rng)))); break;
            case 1: c.add(GateOp::controlled({a}, b, mat::phase(angle(rng)))); break;
            case 2: c.add(GateOp::dense({}, {a, b}, testkit::random_unitary(rng, 4))); break;
            case 3: c.add(GateOp::qft({0, 3}, g % 2 == 0)); break;
            default: c.add(GateOp::multiplexed_ry({0, 2}, 4, {angle(rng), angle(rng), angle(rng), angle(rng)})); break;
            }
        }
        auto s = testkit::random_state(rng, q);
        const auto before = copy(s);
        apply(s, c);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        apply(s, c.inverse());
        EXPECT_LE(testkit::max_abs_diff(copy(s), before), 1e-10);
    }
}

TEST(Circuit, RejectsOutOfRangeQubits)
{
    Circuit c(2);
    EXPECT_THROW(c.add(GateOp::single(2, mat::hadamard())), ValidationError);
    QuantumState s(2);
    EXPECT_THROW(apply(s, GateOp::single(3, mat::hadamard())), ValidationError);
    Circuit wide(3);
    EXPECT_THROW(apply(s, wide), ValidationError);
}
