#include "satca/reports.hpp"

#include <chrono>
#include <cstdio>
#include <future>
#include <stdexcept>

namespace satca {

namespace {

std::string num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string mbps(double bps) { return num("%.6f", bps / 1e6); }

}  // namespace

std::string csv_record(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char ch : f) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  out += "\r\n";
  return out;
}

std::string rates_csv(const Scenario& s, const RateMatrix& r) {
  std::vector<std::string> header{"carrier_id"};
  for (const auto& u : s.users) header.push_back(std::to_string(u.id));
  std::string out = csv_record(header);
  for (std::size_t c = 0; c < r.rows(); ++c) {
    std::vector<std::string> row{std::to_string(s.carriers[c].id)};
    for (std::size_t u = 0; u < r.cols(); ++u) row.push_back(num("%.17g", r(c, u)));
    out += csv_record(row);
  }
  return out;
}

std::string user_report_csv(const SolveReport& r) {
  std::string out = csv_record(
      {"user_id", "demand_mbps", "supply_ca_mbps", "supply_baseline_mbps", "unmet_mbps", "unused_mbps"});
  for (std::size_t u = 0; u < r.user_ids.size(); ++u) {
    const double d = r.demands_bps[u];
    const double s = r.ca.supply_bps[u];
    out += csv_record({std::to_string(r.user_ids[u]), mbps(d), mbps(s), mbps(r.baseline.supply_bps[u]),
                       mbps(std::max(0.0, d - s)), mbps(std::max(0.0, s - d))});
  }
  return out;
}

std::vector<SweepRow> sweep_q(const Scenario& s, const std::vector<std::optional<int>>& qs, int jobs) {
  if (qs.empty()) throw std::invalid_argument("sweep_q: empty q list");
  if (jobs < 1) throw std::invalid_argument("sweep_q: jobs must be >= 1");
  auto run = [&s](std::optional<int> q) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow row{q, evolve(s, s.demand_profiles, q), 0.0};
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
  };
  std::vector<SweepRow> rows;
  for (std::size_t first = 0; first < qs.size(); first += jobs) {
    const std::size_t last = std::min(qs.size(), first + static_cast<std::size_t>(jobs));
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t k = first; k < last; ++k) batch.push_back(std::async(std::launch::async, run, qs[k]));
    for (auto& f : batch) rows.push_back(f.get());
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing) {
  std::vector<std::string> header{"q", "epochs", "status", "psi", "unmet_mbps", "unused_mbps", "swaps"};
  if (timing) header.push_back("wall_time_s");
  std::string out = csv_record(header);
  for (const auto& row : rows) {
    const auto& epochs = row.trace.epochs;
    std::vector<std::string> rec{row.q ? std::to_string(*row.q) : "unconstrained", std::to_string(epochs.size())};
    if (row.trace.error || epochs.empty()) {
      rec.insert(rec.end(), {"error", "", "", "", ""});
    } else {
      const auto& last = epochs.back().result;
      std::string swaps;
      for (std::size_t t = 1; t < epochs.size(); ++t) {
        if (t > 1) swaps += ' ';
        swaps += std::to_string(epochs[t].result.swap_count.value_or(0));
      }
      rec.insert(rec.end(), {to_string(last.status), num("%.9f", last.psi), mbps(last.unmet_bps),
                             mbps(last.unused_bps), swaps});
    }
    if (timing) rec.push_back(num("%.3f", row.wall_time_s));
    out += csv_record(rec);
  }
  return out;
}

}  // namespace satca
