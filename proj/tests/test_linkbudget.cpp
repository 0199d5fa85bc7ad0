#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "satca/linkbudget.hpp"
#include "satca/presets.hpp"

namespace satca {
namespace {

Beam beam(int id, double peak = 52.0, double bw = 0.5) { return {id, 0.0, 0.0, peak, bw, 10.0}; }

TEST(BeamGain, BoresightHalfPowerAndFloor) {
  const Beam b = beam(0, 52.0, 0.5);
  EXPECT_DOUBLE_EQ(beam_gain_db(b, 0.0), 52.0);
  EXPECT_NEAR(beam_gain_db(b, 0.25), 49.0, 1e-12);
  EXPECT_DOUBLE_EQ(beam_gain_db(b, 20.0), 22.0);
}

TEST(FreeSpacePathLoss, GeostationaryKaBand) {
  const double c = 299'792'458.0;
  const double expected = 20.0 * std::log10(4.0 * std::numbers::pi * 35'786e3 * 19.5e9 / c);
  EXPECT_NEAR(free_space_path_loss_db(19.5e9, 35'786e3), expected, 1e-9);
  EXPECT_NEAR(free_space_path_loss_db(19.5e9, 35'786e3), 209.3, 0.05);
}

TEST(ShannonRate, TenDecibels) {
  const double r = shannon_rate_bps(54e6, 0.2, 10.0);
  EXPECT_NEAR(r, 54e6 / 1.2 * std::log2(11.0), 1e-6);
  EXPECT_NEAR(r / 1e6, 155.7, 0.05);
}

// Two beams, one carrier each on distinct frequencies, one user.
Scenario two_beam(double angle0, double angle1) {
  Scenario s;
  s.beams = {beam(0), beam(1)};
  s.carriers = {{0, 0, 0, 54e6, 19.5e9}, {1, 1, 1, 54e6, 19.6e9}};
  User u;
  u.position = {angle0, angle1};
  u.demand_bps = 1e6;
  s.users = {u};
  return s;
}

TEST(RateMatrix, MatchesHandLinkBudget) {
  const Scenario s = two_beam(0.1, 0.3);
  const auto r = compute_rate_matrix(s);
  // Carrier 0: 10 W into one carrier, gain 52 - 12 * 0.04 dB.
  const double gain = 52.0 - 12.0 * 0.04;
  const double cn_db = 10.0 * std::log10(10.0) + gain - free_space_path_loss_db(19.5e9, 35'786e3) +
                       s.link.terminal_g_over_t_db_k - 10.0 * std::log10(1.380649e-23) - 10.0 * std::log10(54e6 / 1.2);
  EXPECT_NEAR(r(0, 0), shannon_rate_bps(54e6, 0.2, std::pow(10.0, cn_db / 10.0)), 1e-3);
}

TEST(RateMatrix, OutsideEligibilityWindowIsZero) {
  Scenario s = two_beam(0.0, 0.6);  // beam 1 is 17.28 dB below beam 0
  auto r = compute_rate_matrix(s);
  EXPECT_GT(r(0, 0), 0.0);
  EXPECT_EQ(r(1, 0), 0.0);
  s.link.eligibility_gain_window_db = 20.0;
  r = compute_rate_matrix(s);
  EXPECT_GT(r(1, 0), 0.0);
}

TEST(RateMatrix, OverrideWins) {
  Scenario s = two_beam(0.0, 0.1);
  s.rate_matrix_override = Matrix<double>::from_rows({{1.0}, {2.0}});
  EXPECT_EQ(effective_rate_matrix(s), *s.rate_matrix_override);
}

TEST(RateMatrixProperty, NonIncreasingInOffAxisAngle) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const double other = angle(rng);
    double previous = std::numeric_limits<double>::infinity();
    for (double own = 0.0; own <= 0.6; own += 0.02) {
      const double r = compute_rate_matrix(two_beam(own, other))(0, 0);
      EXPECT_LE(r, previous + 1e-9);
      previous = r;
    }
  }
}

TEST(RateMatrixProperty, InterferenceNeverHelps) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Scenario s = generate_scenario(Preset::kPaper8, seed);
    s.link.interference_model = InterferenceModel::kNone;
    const auto clean = compute_rate_matrix(s);
    s.link.interference_model = InterferenceModel::kCochannel;
    const auto noisy = compute_rate_matrix(s);
    bool some_strictly_lower = false;
    for (std::size_t k = 0; k < clean.data().size(); ++k) {
      EXPECT_LE(noisy.data()[k], clean.data()[k]);
      some_strictly_lower |= noisy.data()[k] < clean.data()[k];
    }
    EXPECT_TRUE(some_strictly_lower);
  }
}

TEST(RateMatrixProperty, DoublingBandwidthNeverLowersRate) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Scenario s = generate_scenario(Preset::kPaper8, seed);
    const auto narrow = compute_rate_matrix(s);
    for (auto& c : s.carriers) c.bandwidth_hz *= 2.0;
    const auto wide = compute_rate_matrix(s);
    for (std::size_t k = 0; k < narrow.data().size(); ++k) EXPECT_GE(wide.data()[k], narrow.data()[k]);
  }
}

}  // namespace
}  // namespace satca
