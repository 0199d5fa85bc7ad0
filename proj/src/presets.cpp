#include "satca/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace satca {

Preset parse_preset(const std::string& name) {
  if (name == "paper8") return Preset::kPaper8;
  if (name == "evolve2") return Preset::kEvolve2;
  if (name == "tiny") return Preset::kTiny;
  throw std::invalid_argument("unknown preset '" + name + "' (expected paper8, evolve2 or tiny)");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::kPaper8: return "paper8";
    case Preset::kEvolve2: return "evolve2";
    case Preset::kTiny: return "tiny";
  }
  return "unknown";
}

namespace {

constexpr double kCarrierBandwidthHz = 54e6;
constexpr double kBeamPowerW = 10.0;
constexpr double kDownlinkHz = 19.5e9;
constexpr double kRolloff = 0.2;
constexpr int kDeltaMax = 2;
constexpr double kBeamwidthDeg = 0.35;
constexpr double kPeakGainDbi = 53.0;
constexpr double kTerminalGOverT = 24.0;

constexpr double kHighDemandShare = 0.05;
constexpr double kLowDemandMin = 5e6, kLowDemandMax = 30e6;
constexpr double kHighDemandMin = 100e6, kHighDemandMax = 200e6;
// Share of low-demand users that still hold a premium (CA-capable) SLA.
constexpr double kPremiumLowShare = 0.10;

// Generator-independent draws so that output does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(std::floor(uniform() * (hi - lo + 1)));
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

struct Point {
  double x, y;
};

// slots[b] lists the frequency slots of beam b, one carrier per slot.
// Slots are 54 MHz wide and laid out contiguously around the downlink
// frequency.
Scenario base_scenario(const std::vector<Point>& centers, const std::vector<std::vector<int>>& slots) {
  Scenario s;
  s.delta_max = kDeltaMax;
  s.link.downlink_freq_hz = kDownlinkHz;
  s.link.rolloff = kRolloff;
  s.link.terminal_g_over_t_db_k = kTerminalGOverT;
  s.link.interference_model = InterferenceModel::kCochannel;
  int span = 0;
  for (const auto& beam_slots : slots)
    for (int k : beam_slots) span = std::max(span, k + 1);
  for (std::size_t b = 0; b < centers.size(); ++b) {
    s.beams.push_back({static_cast<int>(b), centers[b].x, centers[b].y, kPeakGainDbi, kBeamwidthDeg,
                       kBeamPowerW});
  }
  for (std::size_t b = 0; b < centers.size(); ++b) {
    for (int slot : slots[b]) {
      const double center = kDownlinkHz + (slot - (span - 1) / 2.0) * kCarrierBandwidthHz;
      const int id = static_cast<int>(s.carriers.size());
      s.carriers.push_back({id, static_cast<int>(b), static_cast<int>(b), kCarrierBandwidthHz, center});
    }
  }
  return s;
}

User place_user(Rng& rng, const Scenario& s, int id, int beam) {
  const double radius = kBeamwidthDeg / 2.0 * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double x = s.beams[beam].boresight_x_deg + radius * std::cos(phi);
  const double y = s.beams[beam].boresight_y_deg + radius * std::sin(phi);
  User u;
  u.id = id;
  u.beam_id = beam;
  for (const auto& b : s.beams) u.position.push_back(std::hypot(x - b.boresight_x_deg, y - b.boresight_y_deg));
  return u;
}

void set_sla(User& u, bool premium) {
  u.sla = premium ? Sla::kPremium : Sla::kStandard;
  u.max_carriers = premium ? kDeltaMax : 1;
}

double low_demand(Rng& rng) { return rng.uniform(kLowDemandMin, kLowDemandMax); }
double high_demand(Rng& rng) { return rng.uniform(kHighDemandMin, kHighDemandMax); }

Scenario paper8(Rng& rng) {
  // 2 x 4 hexagonal cluster; cell corners sit on the -3 dB contour.
  const double pitch = kBeamwidthDeg * std::sqrt(3.0) / 2.0;
  std::vector<Point> centers;
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 4; ++col) {
      centers.push_back({col * pitch + (row % 2) * pitch / 2.0, row * pitch * std::sqrt(3.0) / 2.0});
    }
  }
  // Eight slots, each reused by two beams at least 1.7 pitches apart. The
  // first carrier pairs beams along a row, the second pairs them across
  // rows, so the two carriers of a beam see different interferers.
  const std::vector<std::vector<int>> slots = {{0, 4}, {1, 5}, {0, 6}, {1, 7},
                                               {2, 6}, {3, 7}, {2, 5}, {3, 4}};
  Scenario s = base_scenario(centers, slots);
  for (int b = 0; b < 8; ++b) {
    const int count = rng.integer(30, 35);
    for (int k = 0; k < count; ++k) s.users.push_back(place_user(rng, s, static_cast<int>(s.users.size()), b));
  }
  const int nu = static_cast<int>(s.users.size());
  const int high = static_cast<int>(std::lround(kHighDemandShare * nu));
  std::vector<int> order(nu);
  for (int u = 0; u < nu; ++u) order[u] = u;
  for (int k = 0; k < high; ++k) std::swap(order[k], order[rng.integer(k, nu - 1)]);
  std::vector<bool> is_high(nu, false);
  for (int k = 0; k < high; ++k) is_high[order[k]] = true;
  for (int u = 0; u < nu; ++u) {
    auto& user = s.users[u];
    user.demand_bps = is_high[u] ? high_demand(rng) : low_demand(rng);
    set_sla(user, is_high[u] || rng.bernoulli(kPremiumLowShare));
  }
  // At this size the gap does not close; a node limit keeps the result
  // independent of machine speed.
  s.solver.node_limit = 30;
  s.solver.time_limit_s = 100.0;
  return s;
}

Scenario evolve2(Rng& rng) {
  const double pitch = kBeamwidthDeg * std::sqrt(3.0) / 2.0;
  Scenario s = base_scenario({{0.0, 0.0}, {pitch, 0.0}}, {{0, 1}, {2, 3}});
  for (int b = 0; b < 2; ++b) {
    for (int k = 0; k < 20; ++k) s.users.push_back(place_user(rng, s, static_cast<int>(s.users.size()), b));
  }
  // Profile 1: users 0-9 high. Profile 2: users 4-9 drop to low demand and
  // users 10-14 rise to high demand.
  std::vector<double> first(40), second(40);
  for (int u = 0; u < 40; ++u) first[u] = u < 10 ? high_demand(rng) : low_demand(rng);
  second = first;
  for (int u = 4; u < 10; ++u) second[u] = low_demand(rng);
  for (int u = 10; u < 15; ++u) second[u] = high_demand(rng);
  for (int u = 0; u < 40; ++u) {
    s.users[u].demand_bps = first[u];
    set_sla(s.users[u], u < 15);
  }
  s.demand_profiles = {first, second};
  return s;
}

Scenario tiny(Rng& rng) {
  const double pitch = kBeamwidthDeg * std::sqrt(3.0) / 2.0;
  const int per_beam = rng.integer(1, 2);
  Scenario s = per_beam == 1 ? base_scenario({{0.0, 0.0}, {pitch, 0.0}}, {{0}, {1}})
                             : base_scenario({{0.0, 0.0}, {pitch, 0.0}}, {{0, 1}, {2, 3}});
  const int nu = rng.integer(1, 4);
  for (int u = 0; u < nu; ++u) {
    User user = place_user(rng, s, u, rng.integer(0, 1));
    const double kind = rng.uniform();
    user.demand_bps = kind < 0.1 ? 0.0 : kind < 0.4 ? high_demand(rng) : low_demand(rng) * 4.0;
    set_sla(user, rng.bernoulli(0.5));
    s.users.push_back(std::move(user));
  }
  Matrix<double> prev(s.carriers.size(), s.users.size());
  for (auto& v : prev.data()) v = rng.bernoulli(0.4) ? 1.0 : 0.0;
  s.prev_association = std::move(prev);
  s.solver.swap_budget_q = rng.integer(0, 4);
  return s;
}

}  // namespace

Scenario generate_scenario(Preset preset, std::uint64_t seed) {
  Rng rng(seed);
  switch (preset) {
    case Preset::kPaper8: return paper8(rng);
    case Preset::kEvolve2: return evolve2(rng);
    case Preset::kTiny: return tiny(rng);
  }
  throw std::invalid_argument("unknown preset");
}

}  // namespace satca
