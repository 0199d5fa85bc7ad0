#include "satca/lp.hpp"

#include <algorithm>
#include <cmath>

#include "lp_engine.hpp"

namespace satca {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

double max_row_violation(const MilpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    double activity = 0.0;
    double magnitude = std::abs(c.rhs);
    for (const auto& t : c.terms) {
      activity += t.coef * x[t.var];
      magnitude = std::max(magnitude, std::abs(t.coef * x[t.var]));
    }
    double viol = 0.0;
    if (c.sense != Sense::kGreaterEqual) viol = std::max(viol, activity - c.rhs);
    if (c.sense != Sense::kLessEqual) viol = std::max(viol, c.rhs - activity);
    worst = std::max(worst, viol / std::max(1.0, magnitude));
  }
  return worst;
}

double max_bound_violation(const MilpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < p.variables.size(); ++j) {
    worst = std::max(worst, p.variables[j].lower - x[j]);
    worst = std::max(worst, x[j] - p.variables[j].upper);
  }
  return worst;
}

LpSolution solve_lp(const MilpProblem& p) {
  p.check();
  detail::LpEngine engine(p);
  LpSolution out;
  out.status = engine.solve();
  out.iterations = engine.iterations();
  if (out.status != LpStatus::kOptimal) return out;
  out.values = engine.values();
  out.objective = engine.objective();
  if (max_row_violation(p, out.values) > kFeasibilityTol) {
    throw NumericalError("LP solution violates constraints beyond tolerance");
  }
  return out;
}

}  // namespace satca
