#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satca/matrix.hpp"

namespace satca {

inline constexpr int kSchemaVersion = 1;

enum class Sla { kPremium, kStandard };

enum class InterferenceModel { kNone, kCochannel };

struct Beam {
  int id = 0;
  // Boresight in a local angular frame as seen from the satellite. Only the
  // scenario generator uses it; rates are computed from per-user off-axis
  // angles.
  double boresight_x_deg = 0.0;
  double boresight_y_deg = 0.0;
  double peak_gain_dbi = 0.0;
  double half_power_beamwidth_deg = 0.0;
  double tx_power_w = 0.0;

  bool operator==(const Beam&) const = default;
};

struct Carrier {
  int id = 0;
  int transponder_id = 0;
  int beam_id = 0;
  double bandwidth_hz = 0.0;
  double center_freq_hz = 0.0;

  bool operator==(const Carrier&) const = default;
};

struct User {
  int id = 0;
  int beam_id = 0;
  // Off-axis angle (degrees) from each beam's boresight, indexed like
  // Scenario::beams.
  std::vector<double> position;
  double demand_bps = 0.0;
  Sla sla = Sla::kStandard;
  int max_carriers = 1;

  bool operator==(const User&) const = default;
};

struct LinkParams {
  double downlink_freq_hz = 19.5e9;
  double slant_range_m = 35'786e3;
  double terminal_g_over_t_db_k = 17.0;
  double rolloff = 0.2;
  double eligibility_gain_window_db = 15.0;
  InterferenceModel interference_model = InterferenceModel::kNone;

  bool operator==(const LinkParams&) const = default;
};

struct SolverParams {
  // Swap budget Q; nullopt means unconstrained.
  std::optional<int> swap_budget_q;
  double mip_gap = 1e-6;
  double time_limit_s = 60.0;
  // Stops each branch-and-bound run after this many nodes. Unlike the time
  // limit, the outcome does not depend on machine speed.
  std::optional<long> node_limit;
  bool no_oversupply = true;
  bool lexicographic_phase2 = true;

  bool operator==(const SolverParams&) const = default;
};

// r(c, u): rate in bit/s carrier c delivers to user u at fill rate 1.
using RateMatrix = Matrix<double>;
// a(c, u) in {0, 1}.
using AssociationMatrix = Matrix<int>;
// f(c, u) in [0, 1].
using FillRateMatrix = Matrix<double>;
// lambda(c, u) = a(c, u) * f(c, u).
using LambdaMatrix = Matrix<double>;

struct Scenario {
  std::vector<Beam> beams;
  std::vector<Carrier> carriers;
  std::vector<User> users;
  LinkParams link;
  SolverParams solver;
  // Maximum number of carriers a premium terminal decodes simultaneously.
  int delta_max = 2;
  // Kept as read from file so that non-binary entries can be reported by
  // validate_scenario instead of being rejected at parse time.
  std::optional<Matrix<double>> prev_association;
  std::optional<RateMatrix> rate_matrix_override;
  // Optional demand evolution, one vector of per-user demands (bit/s) per
  // epoch. Consumed by evolve / sweep-q.
  std::vector<std::vector<double>> demand_profiles;

  std::size_t num_carriers() const { return carriers.size(); }
  std::size_t num_users() const { return users.size(); }
  std::vector<double> demands() const;

  bool operator==(const Scenario&) const = default;
};

struct Violation {
  std::string entity;  // e.g. "user 7"
  std::string rule;    // e.g. "standard SLA must have max_carriers=1"

  std::string to_string() const { return entity + ": " + rule; }
  bool operator==(const Violation&) const = default;
};

// Checks every structural invariant of a scenario. Returns an empty list iff
// the scenario is well formed.
std::vector<Violation> validate_scenario(const Scenario& s);

// L1 distance between two binary association matrices, i.e. the number of
// entries that differ. Throws std::invalid_argument on shape mismatch or a
// non-binary entry.
int swap_distance(const AssociationMatrix& prev, const AssociationMatrix& next);

// Converts a validated 0/1 matrix. Throws std::invalid_argument otherwise.
AssociationMatrix to_association(const Matrix<double>& m);

std::string to_string(Sla sla);
std::string to_string(InterferenceModel m);

}  // namespace satca
