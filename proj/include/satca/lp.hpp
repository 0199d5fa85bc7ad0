#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "satca/milp.hpp"

namespace satca {

// Raised when the simplex method cannot produce a trustworthy answer even
// after falling back to Bland's rule.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;  // one per MilpProblem variable
  long iterations = 0;
};

// Feasibility tolerance of returned solutions, relative to the magnitude of
// each row's terms.
inline constexpr double kFeasibilityTol = 1e-7;

// Solves the linear relaxation of `p` (integrality is ignored). Optimal
// solutions satisfy every row and bound within kFeasibilityTol.
LpSolution solve_lp(const MilpProblem& p);

// Largest relative row violation and largest bound violation of `x`.
double max_row_violation(const MilpProblem& p, const std::vector<double>& x);
double max_bound_violation(const MilpProblem& p, const std::vector<double>& x);

std::string to_string(LpStatus s);

}  // namespace satca
