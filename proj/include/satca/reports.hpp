#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satca/alloc.hpp"
#include "satca/io.hpp"
#include "satca/model.hpp"

namespace satca {

// One RFC 4180 record (fields quoted only when needed), CRLF terminated.
std::string csv_record(const std::vector<std::string>& fields);

// Header "carrier_id,<user ids...>", one row per carrier, values in bit/s.
std::string rates_csv(const Scenario& s, const RateMatrix& r);

// Columns: user_id, demand_mbps, supply_ca_mbps, supply_baseline_mbps,
// unmet_mbps, unused_mbps. Unmet and unused refer to the CA allocation.
std::string user_report_csv(const SolveReport& r);

struct SweepRow {
  std::optional<int> q;
  EvolutionTrace trace;
  double wall_time_s = 0.0;
};

// One evolve run per entry of `qs` over the scenario's demand profiles,
// up to `jobs` at a time. Rows come back in the order of `qs`.
std::vector<SweepRow> sweep_q(const Scenario& s, const std::vector<std::optional<int>>& qs, int jobs = 1);

// Columns: q, epochs, status, psi, unmet_mbps, unused_mbps, swaps, and
// wall_time_s when `timing` is set. Metrics are those of the last epoch;
// swaps lists the swap count of every epoch after the first, separated by
// spaces. A truncated trace reports status "error".
std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing);

}  // namespace satca
