#include <gtest/gtest.h>

#include <cmath>

#include "satca/alloc.hpp"
#include "satca/presets.hpp"
#include "test_util.hpp"

namespace satca {
namespace {

using testing::make_scenario;

TEST(ComputeMetrics, Examples) {
  const std::vector<double> d{10.0, 20.0, 0.0};
  const std::vector<double> s{15.0, 5.0, 3.0};
  const auto m = compute_metrics(d, s);
  EXPECT_DOUBLE_EQ(m.unmet_bps, 15.0);
  EXPECT_DOUBLE_EQ(m.unused_bps, 8.0);
  EXPECT_DOUBLE_EQ(m.min_ratio, 0.25);
}

TEST(ComputeMetrics, NoDemandGivesInfiniteRatio) {
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_TRUE(std::isinf(compute_metrics(zero, zero).min_ratio));
  EXPECT_THROW(compute_metrics(zero, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(AllocateCa, PremiumUserAggregates) {
  const auto r = allocate_ca(make_scenario({{100e6}, {100e6}}, {150e6}, {2}));
  EXPECT_EQ(r.status, MilpStatus::kOptimal);
  EXPECT_NEAR(r.psi, 1.0, 1e-9);
  EXPECT_NEAR(r.unmet_bps, 0.0, 1e-3);
  EXPECT_NEAR(r.unused_bps, 0.0, 1e-3);
  EXPECT_EQ(r.association(0, 0) + r.association(1, 0), 2);
  EXPECT_EQ(r.method, "ca");
}

TEST(AllocateCa, AllDemandsZero) {
  const auto r = allocate_ca(make_scenario({{100e6, 80e6}}, {0.0, 0.0}));
  EXPECT_EQ(r.psi, 1.0);
  EXPECT_EQ(r.association, AssociationMatrix(1, 2, 0));
  EXPECT_EQ(r.fill_rate, FillRateMatrix(1, 2, 0.0));
  EXPECT_EQ(r.unmet_bps, 0.0);
  EXPECT_EQ(r.unused_bps, 0.0);
}

TEST(AllocateCa, UnreachableSwapBudgetIsAnError) {
  // The previous association gives a standard user two carriers, so at
  // least one swap is needed.
  auto s = make_scenario({{100e6}, {100e6}}, {50e6});
  s.prev_association = Matrix<double>::from_rows({{1.0}, {1.0}});
  s.solver.swap_budget_q = 0;
  try {
    allocate_ca(s);
    FAIL() << "expected AllocationError";
  } catch (const AllocationError& e) {
    EXPECT_EQ(e.status(), MilpStatus::kInfeasible);
  }
  s.solver.swap_budget_q = 1;
  EXPECT_NEAR(allocate_ca(s).psi, 1.0, 1e-9);
}

TEST(AllocateCa, RejectsInvalidScenario) {
  auto s = make_scenario({{100e6}}, {50e6});
  s.users[0].demand_bps = -1.0;
  EXPECT_THROW(allocate_ca(s), ValidationError);
}

TEST(AllocateCa, FillEqualsLambdaAndSupplyMatchesRates) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto s = generate_scenario(Preset::kTiny, seed);
    s.prev_association.reset();
    const auto r = allocate_ca(s);
    EXPECT_LE(r.unused_bps, 1e-3) << "seed " << seed;
    EXPECT_EQ(r.fill_rate, r.lambda);
    for (std::size_t c = 0; c < s.num_carriers(); ++c) {
      double fill = 0.0;
      for (std::size_t u = 0; u < s.num_users(); ++u) {
        fill += r.fill_rate(c, u);
        if (r.association(c, u) == 0) {
          EXPECT_EQ(r.fill_rate(c, u), 0.0);
        }
      }
      EXPECT_LE(fill, 1.0 + 1e-7);
    }
  }
}

TEST(AllocateCa, NeverWorseThanBaselineOnTinyPresets) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto s = generate_scenario(Preset::kTiny, seed);
    s.prev_association.reset();
    const auto ca = allocate_ca(s);
    const auto base = allocate_baseline_no_ca(s);
    // The baseline point is feasible for the max-min model once capped at
    // demand, so its worst ratio bounds the optimum from below.
    const auto d = s.demands();
    double base_psi = 1.0;
    for (std::size_t u = 0; u < d.size(); ++u)
      if (d[u] > 0) base_psi = std::min(base_psi, base.supply_bps[u] / d[u]);
    EXPECT_GE(ca.psi, base_psi - 1e-9) << "seed " << seed;
  }
}

TEST(Baseline, ProportionalEqualRates) {
  const auto r = allocate_baseline_no_ca(make_scenario({{100e6, 100e6}}, {60e6, 40e6}));
  EXPECT_NEAR(r.fill_rate(0, 0), 0.6, 1e-12);
  EXPECT_NEAR(r.fill_rate(0, 1), 0.4, 1e-12);
  EXPECT_NEAR(r.supply_bps[0], 60e6, 1e-6);
  EXPECT_NEAR(r.supply_bps[1], 40e6, 1e-6);
  EXPECT_NEAR(r.unmet_bps, 0.0, 1e-6);
  EXPECT_NEAR(r.unused_bps, 0.0, 1e-6);
  EXPECT_EQ(r.method, "baseline");
}

TEST(Baseline, ProportionalUnequalRates) {
  const auto r = allocate_baseline_no_ca(make_scenario({{100e6, 50e6}}, {60e6, 60e6}));
  EXPECT_NEAR(r.fill_rate(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(r.fill_rate(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(r.supply_bps[0], 50e6, 1e-6);
  EXPECT_NEAR(r.supply_bps[1], 25e6, 1e-6);
  EXPECT_NEAR(r.unmet_bps, 45e6, 1e-6);
}

TEST(Baseline, SaturatedSingleUser) {
  const auto r = allocate_baseline_no_ca(make_scenario({{100e6}}, {130e6}));
  EXPECT_EQ(r.fill_rate(0, 0), 1.0);
  EXPECT_NEAR(r.unmet_bps, 30e6, 1e-6);
}

TEST(Baseline, BestRateWithLowestIndexOnTies) {
  const auto r = allocate_baseline_no_ca(make_scenario({{80e6, 90e6}, {90e6, 90e6}}, {10e6, 10e6}));
  EXPECT_EQ(r.association, AssociationMatrix::from_rows({{0, 1}, {1, 0}}));
}

TEST(Baseline, UserWithoutEligibleCarrierIsWarned) {
  const auto r = allocate_baseline_no_ca(make_scenario({{100e6, 0.0}}, {10e6, 10e6}));
  EXPECT_EQ(r.supply_bps[1], 0.0);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0], "user 1 has no eligible carrier");
}

Scenario two_profile_scenario() {
  auto s = make_scenario({{100e6, 90e6, 70e6}, {60e6, 100e6, 90e6}}, {80e6, 40e6, 30e6}, {2, 1, 1});
  s.demand_profiles = {{80e6, 40e6, 30e6}, {20e6, 90e6, 60e6}};
  return s;
}

TEST(Evolve, ZeroBudgetFreezesAssociation) {
  const auto s = two_profile_scenario();
  const auto t = evolve(s, s.demand_profiles, 0);
  ASSERT_FALSE(t.error);
  ASSERT_EQ(t.epochs.size(), 2u);
  EXPECT_EQ(t.epochs[1].result.association, t.epochs[0].result.association);
  EXPECT_EQ(t.epochs[1].result.swap_count, 0);
  EXPECT_EQ(t.epochs[1].demands, s.demand_profiles[1]);
}

TEST(Evolve, LargeBudgetMatchesUnconstrained) {
  const auto s = two_profile_scenario();
  const auto big = evolve(s, s.demand_profiles, 2 * 2 * 3);
  const auto free = evolve(s, s.demand_profiles, std::nullopt);
  ASSERT_FALSE(big.error);
  ASSERT_FALSE(free.error);
  for (std::size_t t = 0; t < 2; ++t) EXPECT_NEAR(big.epochs[t].result.psi, free.epochs[t].result.psi, 1e-9);
}

TEST(Evolve, BudgetIsRespectedAndPsiNonDecreasing) {
  const auto s = two_profile_scenario();
  double previous = -1.0;
  for (int q = 0; q <= 4; ++q) {
    const auto t = evolve(s, s.demand_profiles, q);
    ASSERT_FALSE(t.error);
    const auto& r = t.epochs[1].result;
    EXPECT_LE(*r.swap_count, q);
    EXPECT_GE(r.psi, previous - 1e-9);
    previous = r.psi;
  }
}

}  // namespace
}  // namespace satca
