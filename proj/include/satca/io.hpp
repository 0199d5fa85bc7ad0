#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satca/alloc.hpp"
#include "satca/model.hpp"

namespace satca {

using Json = nlohmann::ordered_json;

// Malformed JSON, a missing or wrong "schema" field, or a field of the wrong
// type. Structural checks beyond that belong to validate_scenario.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json result_to_json(const AllocationResult& r);
AllocationResult result_from_json(const Json& j);

// Output of `ca-alloc solve`: the CA allocation next to the no-CA baseline
// for the same scenario.
struct SolveReport {
  std::vector<int> user_ids;
  std::vector<double> demands_bps;
  AllocationResult ca;
  AllocationResult baseline;

  bool operator==(const SolveReport&) const = default;
};

Json solve_report_to_json(const SolveReport& r);
SolveReport solve_report_from_json(const Json& j);

Json trace_to_json(const EvolutionTrace& t);
EvolutionTrace trace_from_json(const Json& j);

// Two-space indented, trailing newline.
std::string dump(const Json& j);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Scenario read_scenario(const std::filesystem::path& path);
void write_scenario(const std::filesystem::path& path, const Scenario& s);

}  // namespace satca
