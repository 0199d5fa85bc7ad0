#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "satca/branch_and_bound.hpp"
#include "satca/model.hpp"

namespace satca {

struct Metrics {
  double unmet_bps = 0.0;   // sum_u (d_u - s_u)^+
  double unused_bps = 0.0;  // sum_u (s_u - d_u)^+
  double min_ratio = 0.0;   // min s_u / d_u over d_u > 0; +inf when no such user
};

Metrics compute_metrics(std::span<const double> demands, std::span<const double> supplies);

struct AllocationResult {
  std::string method;  // "ca" or "baseline"
  AssociationMatrix association;
  FillRateMatrix fill_rate;
  LambdaMatrix lambda;
  double psi = 0.0;
  std::vector<double> supply_bps;
  double unmet_bps = 0.0;
  double unused_bps = 0.0;
  // Swap distance to the scenario's prev_association, when one was given.
  std::optional<int> swap_count;
  MilpStatus status = MilpStatus::kOptimal;
  double gap = 0.0;
  long nodes = 0;
  std::vector<std::string> warnings;

  bool operator==(const AllocationResult&) const = default;
};

// Raised for scenarios that fail validate_scenario.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Raised when the solver ends without any incumbent (infeasible model or
// time limit before the first integer point).
class AllocationError : public std::runtime_error {
 public:
  AllocationError(MilpStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  MilpStatus status() const { return status_; }

 private:
  MilpStatus status_;
};

// End-to-end carrier-aggregation allocation: rate matrix, MILP, branch and
// bound, optional lexicographic second phase, metrics.
//
// psi is the certified phase-1 optimum. Reported fill rates equal lambda,
// so capacity a solver leaves parked on unassociated pairs is not shown.
// A result with status kFeasible means the time limit cut the search short.
AllocationResult allocate_ca(const Scenario& s, std::ostream* node_log = nullptr);

// No-CA reference: every user attaches to its best-rate eligible carrier
// (lowest index on ties) and each carrier is shared in proportion to the
// attached demands. Users with no eligible carrier get nothing and a
// warning.
AllocationResult allocate_baseline_no_ca(const Scenario& s);

struct EpochResult {
  std::vector<double> demands;
  AllocationResult result;
};

struct EvolutionTrace {
  std::optional<int> swap_budget_q;
  std::vector<EpochResult> epochs;
  // Set when an epoch failed; epochs then holds the ones before it.
  std::optional<std::string> error;
};

// Epoch 0 is solved without a swap budget; epoch t > 0 uses epoch t-1's
// association as prev_association with budget q (nullopt: unconstrained).
EvolutionTrace evolve(const Scenario& s, const std::vector<std::vector<double>>& profiles,
                      std::optional<int> q);

}  // namespace satca
