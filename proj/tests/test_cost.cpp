#include "qpoisson/cost.hpp"
#include "qpoisson/metrics.hpp"
#include "qpoisson/scaling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace qpoisson;
using namespace qpoisson::analysis;

namespace {

hhl::RegisterLayout layout(int N, hhl::RotationMode mode, int f = 0, int i = 0)
{
    hhl::HhlConfig c;
    c.frac_bits = f;
    c.amp_exponent = i;
    c.mode = mode;
    c.qubit_budget = 64;
    return hhl::layout_registers(N, c);
}

} // namespace

TEST(CostRules, DefaultsAndWidthRules)
{
    const CostRules r;
    EXPECT_EQ(r.unit_cost({CostKind::Cnot}), 1u);
    EXPECT_EQ(r.unit_cost({CostKind::Swap}), 3u);
    EXPECT_EQ(r.unit_cost({CostKind::Toffoli}), 6u);
    EXPECT_EQ(r.unit_cost({CostKind::SingleQubit}), 0u);
    EXPECT_EQ(r.dense(1), 0u);
    EXPECT_EQ(r.dense(2), 3u);
    EXPECT_EQ(r.dense(3), 14u);
    EXPECT_EQ(r.dense(4), 61u);
    EXPECT_EQ(r.unit_cost({CostKind::ControlledDense, 2}), 14u);
    EXPECT_EQ(r.unit_cost({CostKind::MultiControlled, 5}), 32u);
    EXPECT_EQ(r.lookup(6, 6), 384u);
    EXPECT_THROW(r.dense(0), ValidationError);
}

TEST(CostRules, QftOfSixQubits)
{
    EXPECT_EQ(estimate_cost(qft_cost_items(6)).total_cnots, 39u);
    EXPECT_EQ(estimate_cost(qft_cost_items(1)).total_cnots, 0u);
}

TEST(CostRules, ThreeByThreeFaithfulTotal)
{
    const auto report = estimate_cost(layout(4, hhl::RotationMode::Faithful));
    EXPECT_EQ(report.total_cnots, 1026u);
    EXPECT_EQ(report.by_kind.at("xor_lookup").cnots, 768u);
    EXPECT_EQ(report.by_kind.at("controlled_dense_unitary").cnots, 168u);
    EXPECT_EQ(report.by_kind.at("controlled_rotation").cnots, 12u);
    EXPECT_GE(report.total_cnots, 550u);
    EXPECT_LE(report.total_cnots, 55000u);
    EXPECT_EQ(estimate_cost(layout(4, hhl::RotationMode::Compact)).total_cnots, 310u);
}

TEST(CostRules, AdditiveOverConcatenation)
{
    const auto a = hhl_cost_items(layout(4, hhl::RotationMode::Faithful));
    const auto b = qft_cost_items(9);
    auto ab = a;
    append(ab, b);
    EXPECT_EQ(estimate_cost(ab).total_cnots, estimate_cost(a).total_cnots + estimate_cost(b).total_cnots);
    EXPECT_EQ(estimate_cost(AbstractCircuit{}).total_cnots, 0u);
}

TEST(CostRules, MonotoneInPrecisionAndGrid)
{
    for (auto mode : {hhl::RotationMode::Faithful, hhl::RotationMode::Compact}) {
        std::uint64_t previous = 0;
        for (int f = 0; f <= 6; ++f) {
            const auto c = estimate_cost(layout(4, mode, f)).total_cnots;
            EXPECT_GT(c, previous);
            previous = c;
        }
        EXPECT_LT(estimate_cost(layout(4, mode)).total_cnots, estimate_cost(layout(8, mode)).total_cnots);
    }
}

TEST(CostRules, RulesFileOverrides)
{
    std::istringstream in("# tuned for a device\nswap = 2\n  toffoli=7  # comment\n\n");
    const auto r = load_cost_rules(in);
    EXPECT_EQ(r.swap, 2u);
    EXPECT_EQ(r.toffoli, 7u);
    EXPECT_EQ(r.cnot, 1u);
    EXPECT_EQ(estimate_cost(qft_cost_items(6), r).total_cnots, 36u);

    std::istringstream unknown("fredkin = 5\n");
    EXPECT_THROW(load_cost_rules(unknown), ValidationError);
    std::istringstream negative("swap = -1\n");
    EXPECT_THROW(load_cost_rules(negative), ValidationError);
    std::istringstream junk("swap = 3x\n");
    EXPECT_THROW(load_cost_rules(junk), ValidationError);
    std::istringstream no_eq("swap 3\n");
    EXPECT_THROW(load_cost_rules(no_eq), ValidationError);
}

TEST(Fidelity, LogDomainValues)
{
    EXPECT_NEAR(hardware_fidelity(5500, 0.92).log10(), 5500.0 * std::log10(0.92), 1e-9);
    EXPECT_NEAR(hardware_fidelity(5500, 0.92).log10(), -199.167, 1e-3);
    EXPECT_NEAR(hardware_fidelity(100, 0.99).value(), 0.36603, 1e-5);
    EXPECT_EQ(hardware_fidelity(0, 0.92).value(), 1.0);
    EXPECT_EQ(hardware_fidelity(7, 1.0).value(), 1.0);
    EXPECT_NEAR(hardware_fidelity(5500, 1.0 - 8.094e-2).log10(), -201.6, 0.1);
    EXPECT_THROW(hardware_fidelity(1, 0.0), ValidationError);
    EXPECT_THROW(hardware_fidelity(1, 1.5), ValidationError);
}

TEST(Fidelity, ProductAddsCounts)
{
    const auto p = hardware_fidelity(1200, 0.92) * hardware_fidelity(4300, 0.92);
    EXPECT_EQ(p, hardware_fidelity(5500, 0.92));
    EXPECT_EQ(p.log10(), hardware_fidelity(5500, 0.92).log10());
    EXPECT_THROW(hardware_fidelity(1, 0.92) * hardware_fidelity(1, 0.9), ValidationError);
}

TEST(Metrics, RelativeErrors)
{
    const std::vector<double> q = {-0.55, -0.674, -0.49};
    const std::vector<double> c = {0.55299, 0.67407, 0.48974};
    const auto r = relative_errors(q, c);
    EXPECT_EQ(r.per_state.size(), 3u);
    EXPECT_LT(r.max_relative_error, 0.01);
    EXPECT_GT(r.state_fidelity, 0.9999);

    std::vector<double> scaled = c;
    for (double& x : scaled)
        x *= 1.01;
    const auto same = relative_errors(scaled, c);
    EXPECT_NEAR(same.state_fidelity, 1.0, 1e-15);
    EXPECT_LE(same.max_relative_error, 1e-15);

    const std::vector<double> with_zero = {1.0, 0.0};
    const std::vector<double> nearly = {1.0, 1e-3};
    const auto z = relative_errors(nearly, with_zero);
    ASSERT_EQ(z.excluded_states.size(), 1u);
    EXPECT_EQ(z.excluded_states[0], 2);
    EXPECT_THROW(relative_errors(std::vector<double>{0.0, 0.0}, c), ValidationError);
}

TEST(Scaling, SuccessProbabilityExamples)
{
    hhl::HhlConfig cfg;
    const auto two = success_scaling({2}, cfg);
    EXPECT_NEAR(two[0].success_probability, 1.0 / 64.0, 1e-12);
    EXPECT_DOUBLE_EQ(two[0].kappa, 1.0);

    // lambda_1 = 9.3726 is not representable in E, so this needs fine precision
    cfg.frac_bits = 10;
    const auto u1 = success_scaling({4}, cfg, [](int N) { return eigenvector_rhs(N, 1); });
    EXPECT_NEAR(u1[0].success_probability, 1.0 / 87.845, 2e-6);
    EXPECT_NEAR(u1[0].p_kappa_squared, u1[0].success_probability * u1[0].kappa * u1[0].kappa, 1e-15);
    EXPECT_THROW(scaling_spread({}), ValidationError);
}
