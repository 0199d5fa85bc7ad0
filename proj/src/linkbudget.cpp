#include "satca/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace satca {

namespace {

constexpr double kSpeedOfLight = 299'792'458.0;
const double kBoltzmannDb = 10.0 * std::log10(1.380649e-23);
constexpr double kGainFloorDb = 30.0;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

double beam_gain_db(const Beam& beam, double offaxis_deg) {
  if (!(beam.half_power_beamwidth_deg > 0)) {
    throw std::invalid_argument("beam_gain_db: half-power beamwidth must be > 0");
  }
  const double x = offaxis_deg / beam.half_power_beamwidth_deg;
  const double rolloff_db = std::min(12.0 * x * x, kGainFloorDb);
  return beam.peak_gain_dbi - rolloff_db;
}

double free_space_path_loss_db(double freq_hz, double distance_m) {
  const double wavelength = kSpeedOfLight / freq_hz;
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m / wavelength);
}

double shannon_rate_bps(double bandwidth_hz, double rolloff, double sinr_linear) {
  return bandwidth_hz / (1.0 + rolloff) * std::log2(1.0 + sinr_linear);
}

RateMatrix compute_rate_matrix(const Scenario& s) {
  const std::size_t nc = s.num_carriers();
  const std::size_t nu = s.num_users();
  const auto& link = s.link;

  std::vector<std::size_t> beam_pos(nc);
  std::vector<int> carriers_in_beam(s.beams.size(), 0);
  for (std::size_t c = 0; c < nc; ++c) {
    auto it = std::find_if(s.beams.begin(), s.beams.end(),
                           [&](const Beam& b) { return b.id == s.carriers[c].beam_id; });
    if (it == s.beams.end()) throw std::invalid_argument("carrier references unknown beam");
    beam_pos[c] = static_cast<std::size_t>(it - s.beams.begin());
    ++carriers_in_beam[beam_pos[c]];
  }

  const double fspl = free_space_path_loss_db(link.downlink_freq_hz, link.slant_range_m);

  // Received carrier power normalised by the noise power in the carrier's
  // symbol-rate bandwidth, i.e. C/N in linear units, before interference.
  auto snr_linear = [&](std::size_t c, double gain_db) {
    const auto& carrier = s.carriers[c];
    const auto& beam = s.beams[beam_pos[c]];
    const double power_w = beam.tx_power_w / carriers_in_beam[beam_pos[c]];
    const double symbol_rate = carrier.bandwidth_hz / (1.0 + link.rolloff);
    const double cn_db = 10.0 * std::log10(power_w) + gain_db - fspl +
                         link.terminal_g_over_t_db_k - kBoltzmannDb -
                         10.0 * std::log10(symbol_rate);
    return db_to_linear(cn_db);
  };

  RateMatrix r(nc, nu, 0.0);
  std::vector<double> gain(nc);
  for (std::size_t u = 0; u < nu; ++u) {
    const auto& user = s.users[u];
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < nc; ++c) {
      gain[c] = beam_gain_db(s.beams[beam_pos[c]], user.position.at(beam_pos[c]));
      best = std::max(best, gain[c]);
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (gain[c] < best - link.eligibility_gain_window_db) continue;
      double interference = 0.0;
      if (link.interference_model == InterferenceModel::kCochannel) {
        for (std::size_t k = 0; k < nc; ++k) {
          if (k == c || beam_pos[k] == beam_pos[c]) continue;
          if (s.carriers[k].center_freq_hz != s.carriers[c].center_freq_hz) continue;
          // Interferer power lands in the victim's noise bandwidth.
          const double power_w = s.beams[beam_pos[k]].tx_power_w / carriers_in_beam[beam_pos[k]];
          const double own_w = s.beams[beam_pos[c]].tx_power_w / carriers_in_beam[beam_pos[c]];
          interference += snr_linear(c, gain[k]) * power_w / own_w;
        }
      }
      const double sinr = snr_linear(c, gain[c]) / (1.0 + interference);
      r(c, u) = shannon_rate_bps(s.carriers[c].bandwidth_hz, link.rolloff, sinr);
    }
  }
  return r;
}

RateMatrix effective_rate_matrix(const Scenario& s) {
  if (s.rate_matrix_override) return *s.rate_matrix_override;
  return compute_rate_matrix(s);
}

}  // namespace satca
