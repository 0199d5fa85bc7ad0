#include "satca/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace satca {

std::vector<double> Scenario::demands() const {
  std::vector<double> d;
  d.reserve(users.size());
  for (const auto& u : users) d.push_back(u.demand_bps);
  return d;
}

std::string to_string(Sla sla) { return sla == Sla::kPremium ? "premium" : "standard"; }

std::string to_string(InterferenceModel m) {
  return m == InterferenceModel::kCochannel ? "cochannel" : "none";
}

namespace {

bool finite(double v) { return std::isfinite(v); }

std::string entity(const char* kind, int id) { return std::string(kind) + " " + std::to_string(id); }

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&out](std::string who, std::string rule) {
    out.push_back({std::move(who), std::move(rule)});
  };

  std::set<int> beam_ids;
  for (const auto& b : s.beams) {
    const auto who = entity("beam", b.id);
    if (!beam_ids.insert(b.id).second) add(who, "duplicate beam id");
    if (!(b.half_power_beamwidth_deg > 0) || !finite(b.half_power_beamwidth_deg))
      add(who, "half_power_beamwidth_deg must be > 0");
    if (!(b.tx_power_w > 0) || !finite(b.tx_power_w)) add(who, "tx_power_w must be > 0");
    if (!finite(b.peak_gain_dbi)) add(who, "peak_gain_dbi must be finite");
  }

  std::set<int> carrier_ids;
  for (const auto& c : s.carriers) {
    const auto who = entity("carrier", c.id);
    if (!carrier_ids.insert(c.id).second) add(who, "duplicate carrier id");
    if (!(c.bandwidth_hz > 0) || !finite(c.bandwidth_hz)) add(who, "bandwidth_hz must be > 0");
    if (!(c.center_freq_hz >= 0) || !finite(c.center_freq_hz))
      add(who, "center_freq_hz must be >= 0");
    if (!beam_ids.contains(c.beam_id)) add(who, "beam_id does not name a beam");
  }

  if (s.delta_max < 1) add("scenario", "delta_max must be >= 1");

  std::set<int> user_ids;
  for (const auto& u : s.users) {
    const auto who = entity("user", u.id);
    if (!user_ids.insert(u.id).second) add(who, "duplicate user id");
    if (!(u.demand_bps >= 0) || !finite(u.demand_bps)) add(who, "demand_bps must be >= 0");
    if (u.max_carriers < 1) add(who, "max_carriers must be >= 1");
    if (u.sla == Sla::kStandard && u.max_carriers != 1)
      add(who, "standard SLA must have max_carriers=1");
    if (u.sla == Sla::kPremium && u.max_carriers > s.delta_max)
      add(who, "premium max_carriers must not exceed delta_max");
    if (!beam_ids.contains(u.beam_id)) add(who, "beam_id does not name a beam");
    if (u.position.size() != s.beams.size()) {
      add(who, "position must hold one off-axis angle per beam");
    } else {
      for (double a : u.position) {
        if (!(a >= 0) || !finite(a)) {
          add(who, "off-axis angles must be finite and >= 0");
          break;
        }
      }
    }
  }

  const auto& L = s.link;
  if (!(L.slant_range_m > 0)) add("link", "slant_range_m must be > 0");
  if (!(L.rolloff >= 0 && L.rolloff < 1)) add("link", "rolloff must lie in [0, 1)");
  if (!(L.downlink_freq_hz > 0)) add("link", "downlink_freq_hz must be > 0");
  if (!(L.eligibility_gain_window_db >= 0)) add("link", "eligibility_gain_window_db must be >= 0");
  if (!finite(L.terminal_g_over_t_db_k)) add("link", "terminal_g_over_t_db_k must be finite");

  const auto& P = s.solver;
  if (!(P.mip_gap >= 0)) add("solver", "mip_gap must be >= 0");
  if (!(P.time_limit_s > 0)) add("solver", "time_limit_s must be > 0");
  if (P.node_limit && *P.node_limit <= 0) add("solver", "node_limit must be > 0");
  if (P.swap_budget_q && *P.swap_budget_q < 0) add("solver", "swap_budget_q must be >= 0");

  const std::size_t nc = s.carriers.size();
  const std::size_t nu = s.users.size();
  if (s.prev_association) {
    const auto& m = *s.prev_association;
    if (m.rows() != nc || m.cols() != nu) {
      add("prev_association", "shape must be num_carriers x num_users");
    }
    for (double v : m.data()) {
      if (v != 0.0 && v != 1.0) {
        add("prev_association", "association must be binary");
        break;
      }
    }
  }
  if (s.rate_matrix_override) {
    const auto& m = *s.rate_matrix_override;
    if (m.rows() != nc || m.cols() != nu) {
      add("rate_matrix_override", "shape must be num_carriers x num_users");
    }
    for (double v : m.data()) {
      if (!(v >= 0) || !finite(v)) {
        add("rate_matrix_override", "rates must be finite and >= 0");
        break;
      }
    }
  }
  for (std::size_t k = 0; k < s.demand_profiles.size(); ++k) {
    const auto& p = s.demand_profiles[k];
    const auto who = "demand_profiles[" + std::to_string(k) + "]";
    if (p.size() != nu) add(who, "profile must hold one demand per user");
    for (double v : p) {
      if (!(v >= 0) || !finite(v)) {
        add(who, "demands must be finite and >= 0");
        break;
      }
    }
  }
  return out;
}

int swap_distance(const AssociationMatrix& prev, const AssociationMatrix& next) {
  if (!prev.same_shape(next)) throw std::invalid_argument("swap_distance: shape mismatch");
  int d = 0;
  for (std::size_t k = 0; k < prev.data().size(); ++k) {
    const int p = prev.data()[k];
    const int n = next.data()[k];
    if ((p != 0 && p != 1) || (n != 0 && n != 1)) {
      throw std::invalid_argument("swap_distance: association must be binary");
    }
    d += p != n;
  }
  return d;
}

AssociationMatrix to_association(const Matrix<double>& m) {
  AssociationMatrix a(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.data().size(); ++k) {
    const double v = m.data()[k];
    if (v != 0.0 && v != 1.0) throw std::invalid_argument("association must be binary");
    a.data()[k] = static_cast<int>(v);
  }
  return a;
}

}  // namespace satca
