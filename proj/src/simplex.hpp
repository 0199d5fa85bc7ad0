#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace satca::detail {

// minimize cost'x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi.
// A is stored column-wise.
struct SparseLp {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<int> col_start{0};
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;
  std::vector<double> col_lo, col_hi;
  std::vector<double> row_lo, row_hi;
};

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Snapshot of a simplex basis over the n structural plus m logical
// variables; logical i carries row i's activity.
struct Basis {
  std::vector<int> head;
  std::vector<VarStatus> status;
};

struct SimplexTolerances {
  double pivot = 1e-9;
  double feasibility = 1e-7;
  double optimality = 1e-7;
};

enum class SimplexResult { kOptimal, kInfeasible, kUnbounded };

class BasisFactor;

// Bounded-variable primal revised simplex. Phase 1 minimises the sum of
// bound infeasibilities of the basic variables, so any basis (including one
// inherited from a parent branch-and-bound node whose bounds have since
// changed) is a valid starting point. Dantzig pricing, switching to Bland's
// rule after 2 (m + n) consecutive degenerate pivots.
class Simplex {
 public:
  explicit Simplex(SparseLp lp, SimplexTolerances tol = {});
  ~Simplex();
  Simplex(const Simplex&) = delete;
  Simplex& operator=(const Simplex&) = delete;

  const SparseLp& lp() const { return lp_; }
  void set_col_bounds(int j, double lo, double hi);

  // Throws NumericalError when the method cannot make progress.
  SimplexResult solve(const Basis* warm = nullptr);

  Basis basis() const;
  std::vector<double> primal() const;  // structural values
  double objective() const;
  long iterations() const { return iterations_; }

 private:
  int total() const { return n_ + m_; }
  void slack_basis();
  bool load_basis(const Basis& b);
  bool refactor();
  void compute_primal();
  void column(int j, std::vector<double>& dense) const;
  double lower(int j) const;
  double upper(int j) const;
  double nonbasic_value(int j) const;
  bool run_phase(bool phase_one, SimplexResult* unbounded_out);
  double infeasibility_sum() const;

  SparseLp lp_;
  SimplexTolerances tol_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> head_;
  std::vector<int> pos_;  // basis position or -1
  std::vector<VarStatus> status_;
  std::vector<double> x_;
  std::unique_ptr<BasisFactor> factor_;
  long iterations_ = 0;
};

}  // namespace satca::detail
