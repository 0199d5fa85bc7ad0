#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "satca/milp.hpp"
#include "satca/model.hpp"

namespace satca {

enum class MilpStatus {
  kOptimal,     // incumbent within mip_gap of the proven bound
  kFeasible,    // time or node limit hit with an incumbent; gap is honest
  kInfeasible,  // no integer-feasible point exists
  kTimeLimit,   // time or node limit hit before any incumbent was found
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  std::vector<double> values;  // incumbent, empty without one
  double objective = 0.0;
  double bound = 0.0;
  // (bound - objective) / max(|bound|, 1)
  double gap = 0.0;
  double root_bound = 0.0;
  long nodes = 0;
  long lp_iterations = 0;

  bool has_incumbent() const { return !values.empty(); }
};

// Integrality tolerance used to decide whether a relaxation value of a binary
// variable is already integral.
inline constexpr double kIntegralityTol = 1e-6;

// Branch-and-bound over the binary variables of `p`, maximising or
// minimising as `p` says. Best-first node selection on the relaxation bound
// with depth-first plunging, most-fractional branching (ties to the lowest
// index) and rounding heuristics at every node. Incumbents always come from
// an LP solve with every binary fixed exactly to 0 or 1. Uses mip_gap,
// time_limit_s and node_limit from `params`. When `node_log` is set, writes one line per
// node: id, depth, bound, incumbent.
//
// Each entry of `starts` is a full-length point whose binary entries
// (rounded) are tried as an incumbent before the root is solved; points
// that violate the model are ignored.
MilpSolution branch_and_bound(const MilpProblem& p, const SolverParams& params,
                              std::ostream* node_log = nullptr,
                              const std::vector<std::vector<double>>& starts = {});

// Exhaustive verification oracle: tries every 0/1 assignment of the free
// binary variables that satisfies the rows made only of binaries (C3 and C7
// in the carrier-aggregation model) and solves the residual LP for each.
// Throws std::invalid_argument when more than `max_free_binaries` binaries
// are free.
MilpSolution enumerate_oracle(const MilpProblem& p, int max_free_binaries = 20);

std::string to_string(MilpStatus s);

}  // namespace satca
