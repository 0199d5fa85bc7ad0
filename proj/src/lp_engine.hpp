#pragma once

#include <memory>
#include <vector>

#include "satca/lp.hpp"
#include "satca/milp.hpp"
#include "simplex.hpp"

namespace satca::detail {

// Presolved and scaled LP relaxation of a MilpProblem, kept alive across
// re-solves so that branch-and-bound can change bounds of surviving columns
// and warm start from earlier bases.
//
// Presolve removes fixed columns, turns singleton rows into bounds, drops
// empty rows and fixes zero-cost columns whose every row stays satisfied
// when the column moves to one of its bounds. All reductions stay valid
// under later tightening of column bounds. Integer columns are never scaled.
class LpEngine {
 public:
  explicit LpEngine(const MilpProblem& p);

  bool infeasible_at_presolve() const { return presolve_infeasible_; }

  // -1 when presolve removed the variable.
  int reduced_index(int var) const { return to_reduced_[var]; }
  // Value presolve fixed a removed variable to.
  double fixed_value(int var) const { return fixed_value_[var]; }
  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return hi_[var]; }

  // Bounds in original units; `var` must have survived presolve.
  void set_bounds(int var, double lo, double hi);
  // Restores all surviving columns to their presolved bounds.
  void reset_bounds();

  LpStatus solve(const Basis* warm = nullptr);
  Basis basis() const { return simplex_->basis(); }

  // Valid after kOptimal: full-length solution in original units, clamped
  // to bounds, and the objective in the problem's own direction.
  std::vector<double> values() const;
  double objective() const;
  long iterations() const { return simplex_ ? simplex_->iterations() : 0; }

 private:
  bool maximize_ = true;
  std::vector<LinearTerm> objective_terms_;
  bool presolve_infeasible_ = false;
  std::vector<int> to_reduced_;
  std::vector<int> to_original_;
  std::vector<double> fixed_value_;
  std::vector<double> lo_, hi_;  // presolved bounds, original units
  std::vector<double> col_scale_;
  double objective_offset_ = 0.0;
  std::unique_ptr<Simplex> simplex_;
};

}  // namespace satca::detail
