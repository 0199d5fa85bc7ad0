#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "satca/alloc.hpp"
#include "satca/io.hpp"
#include "satca/presets.hpp"
#include "test_util.hpp"

namespace satca {
namespace {

using testing::make_scenario;

TEST(ScenarioJson, RoundTripsPresets) {
  for (auto preset : {Preset::kPaper8, Preset::kEvolve2, Preset::kTiny}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = generate_scenario(preset, seed);
      const auto j = scenario_to_json(s);
      EXPECT_EQ(scenario_from_json(j), s);
      EXPECT_EQ(dump(scenario_to_json(scenario_from_json(Json::parse(dump(j))))), dump(j));
    }
  }
}

TEST(ScenarioJson, RoundTripsOptionalFields) {
  auto s = make_scenario({{100e6, 0.0}}, {50e6, 1e6});
  s.solver.swap_budget_q = 3;
  s.solver.node_limit = 7;
  s.prev_association = Matrix<double>::from_rows({{1.0, 0.0}});
  s.link.interference_model = InterferenceModel::kCochannel;
  EXPECT_EQ(scenario_from_json(scenario_to_json(s)), s);
  s.solver.swap_budget_q.reset();
  s.solver.node_limit.reset();
  s.prev_association.reset();
  s.rate_matrix_override.reset();
  const auto j = scenario_to_json(s);
  EXPECT_EQ(j["solver"]["swap_budget_q"], "unconstrained");
  EXPECT_EQ(scenario_from_json(j), s);
}

TEST(ScenarioJson, FormatErrors) {
  auto j = scenario_to_json(make_scenario({{100e6}}, {50e6}));
  auto missing = j;
  missing.erase("schema");
  EXPECT_THROW(scenario_from_json(missing), FormatError);
  auto wrong_version = j;
  wrong_version["schema"] = 2;
  EXPECT_THROW(scenario_from_json(wrong_version), FormatError);
  auto wrong_type = j;
  wrong_type["delta_max"] = "two";
  EXPECT_THROW(scenario_from_json(wrong_type), FormatError);
  auto bad_sla = j;
  bad_sla["users"][0]["sla"] = "gold";
  EXPECT_THROW(scenario_from_json(bad_sla), FormatError);
  EXPECT_THROW(scenario_from_json(Json::array()), FormatError);
}

TEST(ScenarioJson, BadFileIsFormatError) {
  const auto path = std::filesystem::temp_directory_path() / "satca_bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(read_scenario(path), FormatError);
  std::filesystem::remove(path);
}

TEST(ResultJson, RoundTrips) {
  const auto s = generate_scenario(Preset::kTiny, 3);
  const auto ca = allocate_ca(s);
  EXPECT_EQ(result_from_json(result_to_json(ca)), ca);
  SolveReport r{{0}, {1e6}, ca, allocate_baseline_no_ca(s)};
  r.user_ids.clear();
  r.demands_bps = s.demands();
  for (const auto& u : s.users) r.user_ids.push_back(u.id);
  EXPECT_EQ(solve_report_from_json(Json::parse(dump(solve_report_to_json(r)))), r);
  EXPECT_THROW(solve_report_from_json(result_to_json(ca)), FormatError);
}

TEST(TraceJson, RoundTrips) {
  auto s = make_scenario({{100e6, 90e6}, {60e6, 100e6}}, {80e6, 40e6}, {2, 1});
  s.demand_profiles = {{80e6, 40e6}, {20e6, 90e6}};
  const auto t = evolve(s, s.demand_profiles, 1);
  const auto back = trace_from_json(Json::parse(dump(trace_to_json(t))));
  EXPECT_EQ(back.swap_budget_q, t.swap_budget_q);
  ASSERT_EQ(back.epochs.size(), t.epochs.size());
  for (std::size_t k = 0; k < t.epochs.size(); ++k) {
    EXPECT_EQ(back.epochs[k].demands, t.epochs[k].demands);
    EXPECT_EQ(back.epochs[k].result, t.epochs[k].result);
  }
  EXPECT_EQ(back.error, t.error);
}

TEST(Dump, TwoSpaceIndentAndNewline) {
  EXPECT_EQ(dump(Json{{"a", 1}}), "{\n  \"a\": 1\n}\n");
}

}  // namespace
}  // namespace satca
