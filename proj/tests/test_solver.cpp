#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "satca/branch_and_bound.hpp"
#include "satca/linkbudget.hpp"
#include "satca/lp.hpp"
#include "satca/milp.hpp"
#include "satca/presets.hpp"
#include "test_util.hpp"

namespace satca {
namespace {

using testing::check_point;
using testing::make_scenario;

MilpProblem model_of(const Scenario& s) { return build_milp(s, effective_rate_matrix(s)); }

TEST(SolveLp, SingleUserHalfCarrierSuffices) {
  const auto s = make_scenario({{100e6}}, {50e6});
  const auto p = model_of(s);
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  const auto& ix = p.index;
  EXPECT_NEAR(sol.values[ix.psi()], 1.0, 1e-9);
  EXPECT_NEAR(sol.values[ix.s(0)], 50e6, 50e6 * 1e-9);
  EXPECT_NEAR(sol.values[ix.lambda(0, 0)], 0.5, 1e-9);
  EXPECT_NEAR(sol.values[ix.f(0, 0)], 0.5, 1e-9);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
}

TEST(SolveLp, InfeasibleWhenSupplyIsForcedWithoutRate) {
  const auto s = make_scenario({{0.0}}, {50e6});
  auto p = model_of(s);
  p.add_constraint({"force", {{p.index.s(0), 1.0}}, Sense::kGreaterEqual, 1.0});
  EXPECT_EQ(solve_lp(p).status, LpStatus::kInfeasible);
  EXPECT_EQ(branch_and_bound(p, s.solver).status, MilpStatus::kInfeasible);
}

TEST(SolveLp, UnboundedToy) {
  MilpProblem p;
  const int x = p.add_variable({"x", 0.0, kInf});
  const int y = p.add_variable({"y", 0.0, 1.0});
  p.add_constraint({"r", {{x, 1.0}, {y, -1.0}}, Sense::kGreaterEqual, 0.0});
  p.objective = {{x, 1.0}};
  EXPECT_EQ(solve_lp(p).status, LpStatus::kUnbounded);
}

TEST(SolveLp, SmallTextbookProgram) {
  // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  x=2, y=6, 36
  MilpProblem p;
  const int x = p.add_variable({"x", 0.0, kInf});
  const int y = p.add_variable({"y", 0.0, kInf});
  p.add_constraint({"a", {{x, 1.0}}, Sense::kLessEqual, 4.0});
  p.add_constraint({"b", {{y, 2.0}}, Sense::kLessEqual, 12.0});
  p.add_constraint({"c", {{x, 3.0}, {y, 2.0}}, Sense::kLessEqual, 18.0});
  p.objective = {{x, 3.0}, {y, 5.0}};
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.values[x], 2.0, 1e-9);
  EXPECT_NEAR(sol.values[y], 6.0, 1e-9);
  EXPECT_NEAR(sol.objective, 36.0, 1e-9);
}

TEST(BranchAndBound, TwoUsersShareOneCarrier) {
  const auto s = make_scenario({{100e6, 100e6}}, {60e6, 60e6});
  const auto p = model_of(s);
  const auto sol = branch_and_bound(p, s.solver);
  ASSERT_EQ(sol.status, MilpStatus::kOptimal);
  const auto& ix = p.index;
  EXPECT_NEAR(sol.objective, 5.0 / 6.0, 1e-9);
  EXPECT_NEAR(sol.values[ix.psi()], 5.0 / 6.0, 1e-9);
  EXPECT_NEAR(sol.values[ix.f(0, 0)], 0.5, 1e-9);
  EXPECT_NEAR(sol.values[ix.f(0, 1)], 0.5, 1e-9);
}

TEST(BranchAndBound, PremiumUserAggregatesTwoCarriers) {
  const auto s = make_scenario({{100e6}, {100e6}}, {150e6}, {2});
  const auto p = model_of(s);
  const auto sol = branch_and_bound(p, s.solver);
  ASSERT_EQ(sol.status, MilpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
  EXPECT_NEAR(sol.values[p.index.s(0)], 150e6, 150e6 * 1e-9);
  EXPECT_NEAR(sol.values[p.index.a(0, 0)] + sol.values[p.index.a(1, 0)], 2.0, 1e-9);
}

TEST(BranchAndBound, StandardUserCannotAggregate) {
  const auto s = make_scenario({{100e6}, {100e6}}, {150e6});
  const auto sol = branch_and_bound(model_of(s), s.solver);
  ASSERT_EQ(sol.status, MilpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 100.0 / 150.0, 1e-9);
}

TEST(BranchAndBound, RootBoundDominatesAndGapIsHonest) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto s = generate_scenario(Preset::kTiny, seed);
    const auto sol = branch_and_bound(model_of(s), s.solver);
    if (!sol.has_incumbent()) continue;
    EXPECT_GE(sol.root_bound, sol.objective - 1e-9) << "seed " << seed;
    EXPECT_GE(sol.gap, 0.0);
    EXPECT_NEAR(sol.gap, (sol.bound - sol.objective) / std::max(std::abs(sol.bound), 1.0), 1e-12);
    if (sol.status == MilpStatus::kOptimal) {
      EXPECT_LE(sol.gap, s.solver.mip_gap);
    }
  }
}

TEST(BranchAndBound, AgreesWithOracleOnTinyPresets) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto s = generate_scenario(Preset::kTiny, seed);
    const auto p = model_of(s);
    const auto bnb = branch_and_bound(p, s.solver);
    const auto oracle = enumerate_oracle(p);
    ASSERT_EQ(bnb.has_incumbent(), oracle.has_incumbent()) << "seed " << seed;
    if (oracle.has_incumbent()) {
      EXPECT_NEAR(bnb.objective, oracle.objective, 1e-6) << "seed " << seed;
    }
  }
}

TEST(BranchAndBound, IncumbentsAreFeasibleAndExact) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto s = generate_scenario(Preset::kTiny, seed);
    const auto p = model_of(s);
    const auto sol = branch_and_bound(p, s.solver);
    if (!sol.has_incumbent()) continue;
    const auto f = check_point(s, p.index, sol.values);
    EXPECT_LE(f.max_carrier_fill, 1.0 + 1e-7);
    EXPECT_LE(f.worst_carrier_excess, 0);
    EXPECT_LE(f.max_binary_offset, 1e-9);
    EXPECT_LE(f.max_product_error, 1e-6);
    if (s.prev_association && s.solver.swap_budget_q) {
      EXPECT_LE(f.swaps, *s.solver.swap_budget_q);
    }
    EXPECT_LE(max_row_violation(p, sol.values), kFeasibilityTol);
    EXPECT_LE(max_bound_violation(p, sol.values), kFeasibilityTol);
  }
}

TEST(BranchAndBound, ObjectiveNonDecreasingInSwapBudget) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto s = generate_scenario(Preset::kTiny, seed);
    if (!s.prev_association) continue;
    // A random previous association can break the carrier limits, so small
    // budgets may be infeasible; once feasible, every larger budget must be.
    double previous = -1.0;
    for (int q = 0; q <= 4; ++q) {
      s.solver.swap_budget_q = q;
      const auto sol = branch_and_bound(model_of(s), s.solver);
      if (previous >= 0.0) {
        ASSERT_TRUE(sol.has_incumbent()) << "seed " << seed << " q " << q;
      }
      if (!sol.has_incumbent()) continue;
      EXPECT_GE(sol.objective, previous - 1e-9) << "seed " << seed << " q " << q;
      previous = sol.objective;
    }
  }
}

TEST(BranchAndBound, Deterministic) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = generate_scenario(Preset::kTiny, seed);
    const auto p = model_of(s);
    const auto x = branch_and_bound(p, s.solver);
    const auto y = branch_and_bound(p, s.solver);
    EXPECT_EQ(x.values, y.values);
    EXPECT_EQ(x.nodes, y.nodes);
  }
}

TEST(BranchAndBound, NodeLogHasOneLinePerNode) {
  const auto s = make_scenario({{100e6, 80e6, 30e6}, {90e6, 100e6, 60e6}}, {120e6, 70e6, 40e6}, {2, 1, 1});
  std::ostringstream log;
  const auto sol = branch_and_bound(model_of(s), s.solver, &log);
  const std::regex line(R"(node \d+ depth \d+ bound \S+ incumbent \S+)");
  std::istringstream in(log.str());
  long count = 0;
  for (std::string l; std::getline(in, l); ++count) EXPECT_TRUE(std::regex_match(l, line)) << l;
  EXPECT_EQ(count, sol.nodes);
}

TEST(BranchAndBound, NodeLimitStopsWithHonestStatus) {
  const auto s = generate_scenario(Preset::kPaper8, 1);
  SolverParams params = s.solver;
  params.node_limit = 1;
  params.lexicographic_phase2 = false;
  const auto sol = branch_and_bound(model_of(s), params);
  EXPECT_EQ(sol.nodes, 1);
  ASSERT_EQ(sol.status, MilpStatus::kFeasible);
  EXPECT_GT(sol.gap, 0.0);
}

TEST(BranchAndBound, StartsMustMatchModelSize) {
  const auto s = make_scenario({{100e6}}, {50e6});
  EXPECT_THROW(branch_and_bound(model_of(s), s.solver, nullptr, {{1.0}}), std::invalid_argument);
}

TEST(EnumerateOracle, SingleAssignmentMatchesFixedLp) {
  const auto s = make_scenario({{100e6}}, {150e6});
  auto p = model_of(s);
  const auto oracle = enumerate_oracle(p);
  p.variables[p.index.a(0, 0)].lower = 1.0;
  const auto lp = solve_lp(p);
  ASSERT_EQ(lp.status, LpStatus::kOptimal);
  EXPECT_NEAR(oracle.objective, lp.objective, 1e-9);
  EXPECT_NEAR(oracle.objective, 100.0 / 150.0, 1e-9);
}

TEST(EnumerateOracle, AllRatesZeroGivesZero) {
  const auto s = make_scenario({{0.0, 0.0}, {0.0, 0.0}}, {10e6, 20e6});
  const auto sol = enumerate_oracle(model_of(s));
  ASSERT_EQ(sol.status, MilpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
}

TEST(EnumerateOracle, RefusesLargeInstances) {
  std::vector<std::vector<double>> rates(5, std::vector<double>(5, 100e6));
  const auto s = make_scenario(rates, std::vector<double>(5, 10e6));
  EXPECT_THROW(enumerate_oracle(model_of(s)), std::invalid_argument);
  EXPECT_NO_THROW(enumerate_oracle(model_of(make_scenario({{100e6}}, {1e6})), 1));
}

}  // namespace
}  // namespace satca
