#include "satca/io.hpp"

#include <fstream>
#include <sstream>

namespace satca {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
Json matrix_to_json(const Matrix<T>& m) {
  return m.to_rows();
}

template <typename T>
Matrix<T> matrix_from_json(const Json& j, const char* key) {
  const auto rows = field<std::vector<std::vector<T>>>(j, key);
  try {
    return Matrix<T>::from_rows(rows);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

Sla parse_sla(const std::string& v) {
  if (v == "premium") return Sla::kPremium;
  if (v == "standard") return Sla::kStandard;
  throw FormatError("unknown sla '" + v + "'");
}

InterferenceModel parse_interference(const std::string& v) {
  if (v == "none") return InterferenceModel::kNone;
  if (v == "cochannel") return InterferenceModel::kCochannel;
  throw FormatError("unknown interference_model '" + v + "'");
}

MilpStatus parse_status(const std::string& v) {
  for (auto s : {MilpStatus::kOptimal, MilpStatus::kFeasible, MilpStatus::kInfeasible, MilpStatus::kTimeLimit}) {
    if (to_string(s) == v) return s;
  }
  throw FormatError("unknown status '" + v + "'");
}

void check_schema(const Json& j) {
  if (!j.is_object() || !j.contains("schema")) throw FormatError("missing field 'schema'");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion) {
    throw FormatError("unsupported schema " + j["schema"].dump() + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
}

void check_kind(const Json& j, const char* kind) {
  if (field<std::string>(j, "kind") != kind) {
    throw FormatError(std::string("expected a document of kind '") + kind + "'");
  }
}

Json optional_int(const std::optional<int>& v, const char* none) {
  return v ? Json(*v) : Json(none);
}

std::optional<int> optional_int_from(const Json& j, const char* key, const char* none) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  const auto& v = j[key];
  if (v.is_string() && v.get<std::string>() == none) return std::nullopt;
  if (v.is_number_integer()) return v.get<int>();
  throw FormatError(std::string("field '") + key + "' must be an integer or \"" + none + "\"");
}

Json solver_to_json(const SolverParams& p) {
  Json j;
  j["swap_budget_q"] = optional_int(p.swap_budget_q, "unconstrained");
  j["mip_gap"] = p.mip_gap;
  j["time_limit_s"] = p.time_limit_s;
  j["node_limit"] = p.node_limit ? Json(*p.node_limit) : Json("unlimited");
  j["no_oversupply"] = p.no_oversupply;
  j["lexicographic_phase2"] = p.lexicographic_phase2;
  return j;
}

SolverParams solver_from_json(const Json& j) {
  SolverParams p;
  p.swap_budget_q = optional_int_from(j, "swap_budget_q", "unconstrained");
  p.mip_gap = field<double>(j, "mip_gap");
  p.time_limit_s = field<double>(j, "time_limit_s");
  if (j.contains("node_limit")) {
    const auto& v = j["node_limit"];
    if (v.is_number_integer()) {
      p.node_limit = v.get<long>();
    } else if (!(v.is_string() && v.get<std::string>() == "unlimited")) {
      throw FormatError("field 'node_limit' must be an integer or \"unlimited\"");
    }
  }
  p.no_oversupply = field<bool>(j, "no_oversupply");
  p.lexicographic_phase2 = field<bool>(j, "lexicographic_phase2");
  return p;
}

Json link_to_json(const LinkParams& l) {
  Json j;
  j["downlink_freq_hz"] = l.downlink_freq_hz;
  j["slant_range_m"] = l.slant_range_m;
  j["terminal_g_over_t_db_k"] = l.terminal_g_over_t_db_k;
  j["rolloff"] = l.rolloff;
  j["eligibility_gain_window_db"] = l.eligibility_gain_window_db;
  j["interference_model"] = to_string(l.interference_model);
  return j;
}

LinkParams link_from_json(const Json& j) {
  LinkParams l;
  l.downlink_freq_hz = field<double>(j, "downlink_freq_hz");
  l.slant_range_m = field<double>(j, "slant_range_m");
  l.terminal_g_over_t_db_k = field<double>(j, "terminal_g_over_t_db_k");
  l.rolloff = field<double>(j, "rolloff");
  l.eligibility_gain_window_db = field<double>(j, "eligibility_gain_window_db");
  l.interference_model = parse_interference(field<std::string>(j, "interference_model"));
  return l;
}

Json result_body(const AllocationResult& r) {
  Json j;
  j["method"] = r.method;
  j["status"] = to_string(r.status);
  j["gap"] = r.gap;
  j["nodes"] = r.nodes;
  j["psi"] = r.psi;
  j["unmet_bps"] = r.unmet_bps;
  j["unused_bps"] = r.unused_bps;
  j["swap_count"] = r.swap_count ? Json(*r.swap_count) : Json(nullptr);
  j["supply_bps"] = r.supply_bps;
  j["association"] = matrix_to_json(r.association);
  j["fill_rate"] = matrix_to_json(r.fill_rate);
  j["lambda"] = matrix_to_json(r.lambda);
  j["warnings"] = r.warnings;
  return j;
}

AllocationResult result_body_from(const Json& j) {
  AllocationResult r;
  r.method = field<std::string>(j, "method");
  r.status = parse_status(field<std::string>(j, "status"));
  r.gap = field<double>(j, "gap");
  r.nodes = field<long>(j, "nodes");
  r.psi = field<double>(j, "psi");
  r.unmet_bps = field<double>(j, "unmet_bps");
  r.unused_bps = field<double>(j, "unused_bps");
  if (!j.contains("swap_count")) throw FormatError("missing field 'swap_count'");
  if (!j["swap_count"].is_null()) r.swap_count = field<int>(j, "swap_count");
  r.supply_bps = field<std::vector<double>>(j, "supply_bps");
  r.association = matrix_from_json<int>(j, "association");
  r.fill_rate = matrix_from_json<double>(j, "fill_rate");
  r.lambda = matrix_from_json<double>(j, "lambda");
  r.warnings = field<std::vector<std::string>>(j, "warnings");
  return r;
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["beams"] = Json::array();
  for (const auto& b : s.beams) {
    j["beams"].push_back({{"id", b.id},
                          {"boresight_x_deg", b.boresight_x_deg},
                          {"boresight_y_deg", b.boresight_y_deg},
                          {"peak_gain_dbi", b.peak_gain_dbi},
                          {"half_power_beamwidth_deg", b.half_power_beamwidth_deg},
                          {"tx_power_w", b.tx_power_w}});
  }
  j["carriers"] = Json::array();
  for (const auto& c : s.carriers) {
    j["carriers"].push_back({{"id", c.id},
                             {"transponder_id", c.transponder_id},
                             {"beam_id", c.beam_id},
                             {"bandwidth_hz", c.bandwidth_hz},
                             {"center_freq_hz", c.center_freq_hz}});
  }
  j["users"] = Json::array();
  for (const auto& u : s.users) {
    j["users"].push_back({{"id", u.id},
                          {"beam_id", u.beam_id},
                          {"position", u.position},
                          {"demand_bps", u.demand_bps},
                          {"sla", to_string(u.sla)},
                          {"max_carriers", u.max_carriers}});
  }
  j["link"] = link_to_json(s.link);
  j["solver"] = solver_to_json(s.solver);
  j["delta_max"] = s.delta_max;
  j["prev_association"] = s.prev_association ? matrix_to_json(*s.prev_association) : Json(nullptr);
  j["rate_matrix_override"] = s.rate_matrix_override ? matrix_to_json(*s.rate_matrix_override) : Json(nullptr);
  j["demand_profiles"] = s.demand_profiles;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  check_schema(j);
  Scenario s;
  for (const auto& b : field<Json>(j, "beams")) {
    s.beams.push_back({field<int>(b, "id"), field<double>(b, "boresight_x_deg"), field<double>(b, "boresight_y_deg"),
                       field<double>(b, "peak_gain_dbi"), field<double>(b, "half_power_beamwidth_deg"),
                       field<double>(b, "tx_power_w")});
  }
  for (const auto& c : field<Json>(j, "carriers")) {
    s.carriers.push_back({field<int>(c, "id"), field<int>(c, "transponder_id"), field<int>(c, "beam_id"),
                          field<double>(c, "bandwidth_hz"), field<double>(c, "center_freq_hz")});
  }
  for (const auto& u : field<Json>(j, "users")) {
    User user;
    user.id = field<int>(u, "id");
    user.beam_id = field<int>(u, "beam_id");
    user.position = field<std::vector<double>>(u, "position");
    user.demand_bps = field<double>(u, "demand_bps");
    user.sla = parse_sla(field<std::string>(u, "sla"));
    user.max_carriers = field<int>(u, "max_carriers");
    s.users.push_back(std::move(user));
  }
  s.link = link_from_json(field<Json>(j, "link"));
  s.solver = solver_from_json(field<Json>(j, "solver"));
  s.delta_max = field<int>(j, "delta_max");
  if (j.contains("prev_association") && !j["prev_association"].is_null()) {
    s.prev_association = matrix_from_json<double>(j, "prev_association");
  }
  if (j.contains("rate_matrix_override") && !j["rate_matrix_override"].is_null()) {
    s.rate_matrix_override = matrix_from_json<double>(j, "rate_matrix_override");
  }
  if (j.contains("demand_profiles")) {
    s.demand_profiles = field<std::vector<std::vector<double>>>(j, "demand_profiles");
  }
  return s;
}

Json result_to_json(const AllocationResult& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "allocation_result";
  j.update(result_body(r));
  return j;
}

AllocationResult result_from_json(const Json& j) {
  check_schema(j);
  check_kind(j, "allocation_result");
  return result_body_from(j);
}

Json solve_report_to_json(const SolveReport& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "solve_report";
  j["user_ids"] = r.user_ids;
  j["demands_bps"] = r.demands_bps;
  j["ca"] = result_body(r.ca);
  j["baseline"] = result_body(r.baseline);
  return j;
}

SolveReport solve_report_from_json(const Json& j) {
  check_schema(j);
  check_kind(j, "solve_report");
  SolveReport r;
  r.user_ids = field<std::vector<int>>(j, "user_ids");
  r.demands_bps = field<std::vector<double>>(j, "demands_bps");
  r.ca = result_body_from(field<Json>(j, "ca"));
  r.baseline = result_body_from(field<Json>(j, "baseline"));
  const auto n = r.user_ids.size();
  if (r.demands_bps.size() != n || r.ca.supply_bps.size() != n || r.baseline.supply_bps.size() != n) {
    throw FormatError("solve report: per-user arrays differ in length");
  }
  return r;
}

Json trace_to_json(const EvolutionTrace& t) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "evolution_trace";
  j["swap_budget_q"] = optional_int(t.swap_budget_q, "unconstrained");
  j["epochs"] = Json::array();
  for (const auto& e : t.epochs) {
    j["epochs"].push_back({{"demands_bps", e.demands}, {"result", result_body(e.result)}});
  }
  j["error"] = t.error ? Json(*t.error) : Json(nullptr);
  return j;
}

EvolutionTrace trace_from_json(const Json& j) {
  check_schema(j);
  check_kind(j, "evolution_trace");
  EvolutionTrace t;
  t.swap_budget_q = optional_int_from(j, "swap_budget_q", "unconstrained");
  for (const auto& e : field<Json>(j, "epochs")) {
    t.epochs.push_back({field<std::vector<double>>(e, "demands_bps"), result_body_from(field<Json>(e, "result"))});
  }
  if (j.contains("error") && !j["error"].is_null()) t.error = field<std::string>(j, "error");
  return t;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

Scenario read_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void write_scenario(const std::filesystem::path& path, const Scenario& s) {
  write_text_file(path, dump(scenario_to_json(s)));
}

}  // namespace satca
