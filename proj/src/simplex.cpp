#include "simplex.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "satca/lp.hpp"

namespace satca::detail {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr int kDenseLimit = 120;
constexpr int kMaxEtas = 96;
constexpr double kEtaDrop = 1e-14;

}  // namespace

// LU of the basis matrix plus a product-form eta file for the updates since
// the last factorisation.
class BasisFactor {
 public:
  explicit BasisFactor(int m) : m_(m), dense_(m <= kDenseLimit) {}

  bool factorize(const std::vector<Eigen::Triplet<double>>& triplets) {
    etas_.clear();
    if (m_ == 0) return true;
    if (dense_) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
      for (const auto& t : triplets) b(t.row(), t.col()) += t.value();
      dlu_.compute(b);
      return dlu_.rcond() > 1e-14;
    }
    Eigen::SparseMatrix<double> b(m_, m_);
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    slu_.analyzePattern(b);
    slu_.factorize(b);
    return slu_.info() == Eigen::Success;
  }

  void ftran(std::vector<double>& v) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> vec(v.data(), m_);
    if (dense_) {
      vec = dlu_.solve(vec).eval();
    } else {
      Eigen::VectorXd out = slu_.solve(vec);
      vec = out;
    }
    for (const auto& e : etas_) {
      const double vr = v[e.r] / e.pivot;
      if (vr != 0.0) {
        for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * vr;
      }
      v[e.r] = vr;
    }
  }

  void btran(std::vector<double>& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->r];
      for (std::size_t k = 0; k < it->idx.size(); ++k) acc -= it->val[k] * v[it->idx[k]];
      v[it->r] = acc / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> vec(v.data(), m_);
    if (dense_) {
      vec = dlu_.transpose().solve(vec).eval();
    } else {
      Eigen::VectorXd out = slu_.transpose().solve(vec);
      vec = out;
    }
  }

  void push_eta(int r, const std::vector<double>& alpha) {
    Eta e;
    e.r = r;
    e.pivot = alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (i != r && std::abs(alpha[i]) > kEtaDrop) {
        e.idx.push_back(i);
        e.val.push_back(alpha[i]);
      }
    }
    etas_.push_back(std::move(e));
  }

  int num_etas() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int r = 0;
    double pivot = 1.0;
    std::vector<int> idx;
    std::vector<double> val;
  };

  int m_;
  bool dense_;
  Eigen::PartialPivLU<Eigen::MatrixXd> dlu_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> slu_;
  std::vector<Eta> etas_;
};

Simplex::Simplex(SparseLp lp, SimplexTolerances tol)
    : lp_(std::move(lp)), tol_(tol), n_(lp_.num_cols), m_(lp_.num_rows) {
  factor_ = std::make_unique<BasisFactor>(m_);
  x_.assign(total(), 0.0);
  slack_basis();
}

Simplex::~Simplex() = default;

void Simplex::set_col_bounds(int j, double lo, double hi) {
  lp_.col_lo[j] = lo;
  lp_.col_hi[j] = hi;
}

double Simplex::lower(int j) const { return j < n_ ? lp_.col_lo[j] : lp_.row_lo[j - n_]; }
double Simplex::upper(int j) const { return j < n_ ? lp_.col_hi[j] : lp_.row_hi[j - n_]; }

double Simplex::nonbasic_value(int j) const {
  switch (status_[j]) {
    case VarStatus::kAtLower: return lower(j);
    case VarStatus::kAtUpper: return upper(j);
    default: return 0.0;
  }
}

namespace {

VarStatus resting_status(double lo, double hi) {
  if (std::isfinite(lo)) return VarStatus::kAtLower;
  if (std::isfinite(hi)) return VarStatus::kAtUpper;
  return VarStatus::kFree;
}

}  // namespace

void Simplex::slack_basis() {
  head_.resize(m_);
  pos_.assign(total(), -1);
  status_.assign(total(), VarStatus::kAtLower);
  for (int j = 0; j < n_; ++j) status_[j] = resting_status(lower(j), upper(j));
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    pos_[n_ + i] = i;
    status_[n_ + i] = VarStatus::kBasic;
  }
}

bool Simplex::load_basis(const Basis& b) {
  if (static_cast<int>(b.head.size()) != m_ || static_cast<int>(b.status.size()) != total()) {
    return false;
  }
  head_ = b.head;
  status_ = b.status;
  pos_.assign(total(), -1);
  for (int i = 0; i < m_; ++i) {
    const int k = head_[i];
    if (k < 0 || k >= total() || pos_[k] != -1 || status_[k] != VarStatus::kBasic) return false;
    pos_[k] = i;
  }
  for (int j = 0; j < total(); ++j) {
    if (pos_[j] >= 0) continue;
    if (status_[j] == VarStatus::kBasic) return false;
    const double lo = lower(j);
    const double hi = upper(j);
    if (status_[j] == VarStatus::kAtLower && !std::isfinite(lo)) status_[j] = resting_status(lo, hi);
    if (status_[j] == VarStatus::kAtUpper && !std::isfinite(hi)) status_[j] = resting_status(lo, hi);
    if (status_[j] == VarStatus::kFree && (std::isfinite(lo) || std::isfinite(hi)))
      status_[j] = resting_status(lo, hi);
  }
  return true;
}

bool Simplex::refactor() {
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m_; ++i) {
    const int k = head_[i];
    if (k < n_) {
      for (int p = lp_.col_start[k]; p < lp_.col_start[k + 1]; ++p) {
        trips.emplace_back(lp_.row_index[p], i, lp_.value[p]);
      }
    } else {
      trips.emplace_back(k - n_, i, -1.0);
    }
  }
  return factor_->factorize(trips);
}

void Simplex::compute_primal() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < total(); ++j) {
    if (pos_[j] >= 0) continue;
    const double v = nonbasic_value(j);
    x_[j] = v;
    if (v == 0.0) continue;
    if (j < n_) {
      for (int p = lp_.col_start[j]; p < lp_.col_start[j + 1]; ++p) rhs[lp_.row_index[p]] -= lp_.value[p] * v;
    } else {
      rhs[j - n_] += v;
    }
  }
  factor_->ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[head_[i]] = rhs[i];
}

void Simplex::column(int j, std::vector<double>& dense) const {
  std::fill(dense.begin(), dense.end(), 0.0);
  if (j < n_) {
    for (int p = lp_.col_start[j]; p < lp_.col_start[j + 1]; ++p) dense[lp_.row_index[p]] = lp_.value[p];
  } else {
    dense[j - n_] = -1.0;
  }
}

double Simplex::infeasibility_sum() const {
  double sum = 0.0;
  for (int i = 0; i < m_; ++i) {
    const int k = head_[i];
    const double lo = lower(k);
    const double hi = upper(k);
    if (x_[k] < lo - tol_.feasibility) sum += lo - x_[k];
    if (x_[k] > hi + tol_.feasibility) sum += x_[k] - hi;
  }
  return sum;
}

bool Simplex::run_phase(bool phase_one, SimplexResult* unbounded_out) {
  const int N = total();
  const long iteration_cap = 50L * N + 20000;
  const long degenerate_cap = 2L * N;
  long degenerate_run = 0;
  bool bland = false;
  int stalls = 0;

  std::vector<double> y(m_);
  std::vector<double> alpha(m_);

  for (long it = 0;; ++it) {
    if (it > iteration_cap) throw NumericalError("simplex iteration limit exceeded");
    if (factor_->num_etas() >= kMaxEtas) {
      if (!refactor()) throw NumericalError("basis became singular");
      compute_primal();
    }

    // Basic costs.
    bool any_cost = false;
    for (int i = 0; i < m_; ++i) {
      const int k = head_[i];
      double c = 0.0;
      if (phase_one) {
        if (x_[k] < lower(k) - tol_.feasibility) c = -1.0;
        else if (x_[k] > upper(k) + tol_.feasibility) c = 1.0;
      } else if (k < n_) {
        c = lp_.cost[k];
      }
      y[i] = c;
      any_cost = any_cost || c != 0.0;
    }
    if (phase_one && !any_cost) return true;
    factor_->btran(y);

    // Pricing.
    int enter = -1;
    double enter_d = 0.0;
    double best = 0.0;
    for (int j = 0; j < N; ++j) {
      if (pos_[j] >= 0) continue;
      const VarStatus st = status_[j];
      if (lower(j) == upper(j)) continue;
      double d;
      if (j < n_) {
        d = phase_one ? 0.0 : lp_.cost[j];
        for (int p = lp_.col_start[j]; p < lp_.col_start[j + 1]; ++p) d -= y[lp_.row_index[p]] * lp_.value[p];
      } else {
        d = y[j - n_];
      }
      const bool eligible = (st == VarStatus::kAtLower && d < -tol_.optimality) ||
                            (st == VarStatus::kAtUpper && d > tol_.optimality) ||
                            (st == VarStatus::kFree && std::abs(d) > tol_.optimality);
      if (!eligible) continue;
      if (bland) {
        enter = j;
        enter_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        enter_d = d;
      }
    }
    if (enter < 0) return true;

    const double dir = enter_d < 0 ? 1.0 : -1.0;
    column(enter, alpha);
    factor_->ftran(alpha);

    // Ratio test. Basic x_k moves at rate g = -dir * alpha_i per unit step.
    auto block = [&](int i, double g, double& bound_out, bool& at_upper) -> bool {
      const int k = head_[i];
      const double xk = x_[k];
      const double lo = lower(k);
      const double hi = upper(k);
      if (g < 0) {
        if (phase_one && xk > hi + tol_.feasibility) {
          bound_out = hi;
          at_upper = true;
          return true;
        }
        if (phase_one && xk < lo - tol_.feasibility) return false;
        if (!std::isfinite(lo)) return false;
        bound_out = lo;
        at_upper = false;
        return true;
      }
      if (phase_one && xk < lo - tol_.feasibility) {
        bound_out = lo;
        at_upper = false;
        return true;
      }
      if (phase_one && xk > hi + tol_.feasibility) return false;
      if (!std::isfinite(hi)) return false;
      bound_out = hi;
      at_upper = true;
      return true;
    };

    double theta_max = kInfinity;
    for (int i = 0; i < m_; ++i) {
      const double g = -dir * alpha[i];
      if (std::abs(g) < tol_.pivot) continue;
      double bound;
      bool at_upper;
      if (!block(i, g, bound, at_upper)) continue;
      const double xk = x_[head_[i]];
      const bool breakpoint = phase_one && (xk < lower(head_[i]) - tol_.feasibility ||
                                            xk > upper(head_[i]) + tol_.feasibility);
      const double slack = breakpoint ? 0.0 : tol_.feasibility;
      const double relaxed = g < 0 ? (xk - (bound - slack)) / -g : ((bound + slack) - xk) / g;
      theta_max = std::min(theta_max, relaxed);
    }

    int leave = -1;
    double leave_theta = kInfinity;
    bool leave_upper = false;
    double leave_bound = 0.0;
    double leave_mag = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double g = -dir * alpha[i];
      if (std::abs(g) < tol_.pivot) continue;
      double bound;
      bool at_upper;
      if (!block(i, g, bound, at_upper)) continue;
      const double xk = x_[head_[i]];
      const double ratio = std::max(0.0, g < 0 ? (xk - bound) / -g : (bound - xk) / g);
      if (bland) {
        if (leave < 0 || ratio < leave_theta - 1e-12 ||
            (ratio <= leave_theta + 1e-12 && head_[i] < head_[leave])) {
          leave = i;
          leave_theta = ratio;
          leave_upper = at_upper;
          leave_bound = bound;
        }
      } else if (ratio <= theta_max && std::abs(g) > leave_mag) {
        leave = i;
        leave_theta = ratio;
        leave_upper = at_upper;
        leave_bound = bound;
        leave_mag = std::abs(g);
      }
    }

    const double flip = upper(enter) - lower(enter);
    const bool can_flip = std::isfinite(flip) && status_[enter] != VarStatus::kFree;
    if (leave < 0 && !can_flip) {
      if (!phase_one) {
        *unbounded_out = SimplexResult::kUnbounded;
        return false;
      }
      // Phase 1 cannot be unbounded; the direction came from numerical noise.
      if (++stalls > 3) throw NumericalError("phase 1 found an unbounded direction");
      if (!refactor()) throw NumericalError("basis became singular");
      compute_primal();
      continue;
    }

    ++iterations_;
    if (can_flip && (leave < 0 || flip <= leave_theta)) {
      for (int i = 0; i < m_; ++i) x_[head_[i]] += -dir * alpha[i] * flip;
      x_[enter] += dir * flip;
      status_[enter] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x_[enter] = nonbasic_value(enter);
      degenerate_run = 0;
      continue;
    }

    const double theta = leave_theta;
    for (int i = 0; i < m_; ++i) x_[head_[i]] += -dir * alpha[i] * theta;
    x_[enter] += dir * theta;
    const int out = head_[leave];
    x_[out] = leave_bound;
    status_[out] = leave_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
    if (lower(out) == upper(out)) status_[out] = VarStatus::kAtLower;
    pos_[out] = -1;
    head_[leave] = enter;
    pos_[enter] = leave;
    status_[enter] = VarStatus::kBasic;
    factor_->push_eta(leave, alpha);

    if (theta <= 1e-12) {
      if (++degenerate_run > degenerate_cap) bland = true;
    } else {
      degenerate_run = 0;
    }
  }
}

SimplexResult Simplex::solve(const Basis* warm) {
  if (!(warm && load_basis(*warm) && refactor())) {
    slack_basis();
    if (!refactor()) throw NumericalError("slack basis is singular");
  }
  compute_primal();

  for (int attempt = 0; attempt < 4; ++attempt) {
    SimplexResult unbounded = SimplexResult::kOptimal;
    if (infeasibility_sum() > 0.0) {
      run_phase(true, &unbounded);
      if (!refactor()) throw NumericalError("basis became singular");
      compute_primal();
      if (infeasibility_sum() > 0.0) {
        // Confirm with a fresh phase 1 from the refactored point.
        run_phase(true, &unbounded);
        if (!refactor()) throw NumericalError("basis became singular");
        compute_primal();
        if (infeasibility_sum() > 0.0) return SimplexResult::kInfeasible;
      }
    }
    const bool done = run_phase(false, &unbounded);
    if (!done) return SimplexResult::kUnbounded;
    if (!refactor()) throw NumericalError("basis became singular");
    compute_primal();
    if (infeasibility_sum() == 0.0) return SimplexResult::kOptimal;
  }
  throw NumericalError("simplex could not restore primal feasibility");
}

Basis Simplex::basis() const { return {head_, status_}; }

std::vector<double> Simplex::primal() const { return {x_.begin(), x_.begin() + n_}; }

double Simplex::objective() const {
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += lp_.cost[j] * x_[j];
  return obj;
}

}  // namespace satca::detail
