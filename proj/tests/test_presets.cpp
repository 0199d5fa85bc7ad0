#include <gtest/gtest.h>

#include "satca/io.hpp"
#include "satca/presets.hpp"

namespace satca {
namespace {

TEST(Presets, Paper8Shape) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = generate_scenario(Preset::kPaper8, seed);
    EXPECT_EQ(s.beams.size(), 8u);
    EXPECT_EQ(s.num_carriers(), 16u);
    EXPECT_GE(s.num_users(), 240u);
    EXPECT_LE(s.num_users(), 280u);
    EXPECT_EQ(s.delta_max, 2);
    EXPECT_TRUE(validate_scenario(s).empty());
    int high = 0;
    for (const auto& u : s.users) {
      EXPECT_EQ(u.max_carriers, u.sla == Sla::kPremium ? 2 : 1);
      high += u.demand_bps >= 100e6;
    }
    EXPECT_EQ(high, static_cast<int>(std::lround(0.05 * static_cast<double>(s.num_users()))));
    for (const auto& c : s.carriers) EXPECT_EQ(c.bandwidth_hz, 54e6);
    for (const auto& b : s.beams) EXPECT_EQ(b.tx_power_w, 10.0);
  }
}

TEST(Presets, Evolve2Shape) {
  const auto s = generate_scenario(Preset::kEvolve2, 1);
  EXPECT_EQ(s.beams.size(), 2u);
  EXPECT_EQ(s.num_users(), 40u);
  ASSERT_EQ(s.demand_profiles.size(), 2u);
  for (const auto& p : s.demand_profiles) EXPECT_EQ(p.size(), 40u);
  EXPECT_NE(s.demand_profiles[0], s.demand_profiles[1]);
  EXPECT_TRUE(validate_scenario(s).empty());
}

TEST(Presets, TinyIsOracleSized) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto s = generate_scenario(Preset::kTiny, seed);
    EXPECT_LE(s.num_carriers(), 4u);
    EXPECT_LE(s.num_users(), 4u);
    EXPECT_TRUE(validate_scenario(s).empty()) << "seed " << seed;
  }
}

TEST(Presets, Deterministic) {
  for (auto preset : {Preset::kPaper8, Preset::kEvolve2, Preset::kTiny}) {
    EXPECT_EQ(dump(scenario_to_json(generate_scenario(preset, 9))), dump(scenario_to_json(generate_scenario(preset, 9))));
    EXPECT_NE(generate_scenario(preset, 9), generate_scenario(preset, 10));
  }
}

TEST(Presets, ParseNames) {
  EXPECT_EQ(parse_preset("paper8"), Preset::kPaper8);
  EXPECT_EQ(parse_preset("evolve2"), Preset::kEvolve2);
  EXPECT_EQ(parse_preset("tiny"), Preset::kTiny);
  EXPECT_EQ(to_string(Preset::kEvolve2), "evolve2");
  EXPECT_THROW(parse_preset("paper9"), std::invalid_argument);
}

}  // namespace
}  // namespace satca
