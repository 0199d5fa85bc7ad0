#include "lp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace satca::detail {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kPresolveTol = 1e-9;

double power_of_two(double v) { return std::exp2(std::round(std::log2(v))); }

struct Entry {
  int index;
  double coef;
};

}  // namespace

LpEngine::LpEngine(const MilpProblem& p) : maximize_(p.maximize), objective_terms_(p.objective) {
  const int n = static_cast<int>(p.variables.size());
  const int m = static_cast<int>(p.constraints.size());

  lo_.resize(n);
  hi_.resize(n);
  std::vector<bool> integer(n);
  std::vector<double> cost(n, 0.0);
  for (int j = 0; j < n; ++j) {
    lo_[j] = p.variables[j].lower;
    hi_[j] = p.variables[j].upper;
    integer[j] = p.variables[j].integrality == Integrality::kBinary;
    if (integer[j]) {
      lo_[j] = std::max(lo_[j], 0.0);
      hi_[j] = std::min(hi_[j], 1.0);
    }
  }
  for (const auto& t : p.objective) cost[t.var] += maximize_ ? -t.coef : t.coef;

  std::vector<double> row_lo(m), row_hi(m);
  std::vector<std::vector<Entry>> rows(m);
  std::vector<std::vector<Entry>> cols(n);
  for (int i = 0; i < m; ++i) {
    const auto& c = p.constraints[i];
    row_lo[i] = c.sense == Sense::kLessEqual ? -kInfinity : c.rhs;
    row_hi[i] = c.sense == Sense::kGreaterEqual ? kInfinity : c.rhs;
    for (const auto& t : c.terms) {
      if (t.coef == 0.0) continue;
      rows[i].push_back({t.var, t.coef});
      cols[t.var].push_back({i, t.coef});
    }
  }

  std::vector<bool> col_alive(n, true), row_alive(m, true);
  fixed_value_.assign(n, 0.0);

  auto fix_column = [&](int j, double v) {
    col_alive[j] = false;
    fixed_value_[j] = v;
    objective_offset_ += cost[j] * v;
    for (const auto& e : cols[j]) {
      if (!row_alive[e.index]) continue;
      row_lo[e.index] -= e.coef * v;
      row_hi[e.index] -= e.coef * v;
    }
  };

  bool changed = true;
  while (changed && !presolve_infeasible_) {
    changed = false;
    for (int j = 0; j < n; ++j) {
      if (!col_alive[j]) continue;
      if (lo_[j] > hi_[j] + kPresolveTol) {
        presolve_infeasible_ = true;
        break;
      }
      if (hi_[j] - lo_[j] <= kPresolveTol) {
        const double v = integer[j] ? std::round(lo_[j]) : lo_[j];
        hi_[j] = lo_[j] = v;
        fix_column(j, v);
        changed = true;
      }
    }
    if (presolve_infeasible_) break;

    for (int i = 0; i < m; ++i) {
      if (!row_alive[i]) continue;
      int live = 0;
      Entry single{-1, 0.0};
      for (const auto& e : rows[i]) {
        if (col_alive[e.index]) {
          ++live;
          single = e;
        }
      }
      if (live == 0) {
        const double scale = std::max(1.0, std::max(std::isfinite(row_lo[i]) ? std::abs(row_lo[i]) : 0.0,
                                                    std::isfinite(row_hi[i]) ? std::abs(row_hi[i]) : 0.0));
        if (row_lo[i] > kPresolveTol * scale || row_hi[i] < -kPresolveTol * scale) {
          presolve_infeasible_ = true;
          break;
        }
        row_alive[i] = false;
        changed = true;
      } else if (live == 1) {
        const int j = single.index;
        double lo = row_lo[i] / single.coef;
        double hi = row_hi[i] / single.coef;
        if (single.coef < 0) std::swap(lo, hi);
        if (integer[j]) {
          lo = std::ceil(lo - kPresolveTol);
          hi = std::floor(hi + kPresolveTol);
        }
        lo_[j] = std::max(lo_[j], lo);
        hi_[j] = std::min(hi_[j], hi);
        if (lo_[j] > hi_[j]) {
          const double scale = std::max(1.0, std::abs(lo_[j]));
          if (lo_[j] - hi_[j] > kPresolveTol * scale) {
            presolve_infeasible_ = true;
            break;
          }
          hi_[j] = lo_[j];
        }
        row_alive[i] = false;
        changed = true;
      }
    }
    if (presolve_infeasible_) break;

    // Dominated columns: moving toward one bound keeps every row satisfied
    // and does not worsen the objective.
    for (int j = 0; j < n; ++j) {
      if (!col_alive[j]) continue;
      bool dec_safe = true;
      bool inc_safe = true;
      for (const auto& e : cols[j]) {
        if (!row_alive[e.index]) continue;
        const bool has_lo = std::isfinite(row_lo[e.index]);
        const bool has_hi = std::isfinite(row_hi[e.index]);
        if (e.coef > 0) {
          dec_safe = dec_safe && !has_lo;
          inc_safe = inc_safe && !has_hi;
        } else {
          dec_safe = dec_safe && !has_hi;
          inc_safe = inc_safe && !has_lo;
        }
      }
      if (cost[j] >= 0 && dec_safe && std::isfinite(lo_[j])) {
        hi_[j] = lo_[j];
        fix_column(j, lo_[j]);
        changed = true;
      } else if (cost[j] <= 0 && inc_safe && std::isfinite(hi_[j])) {
        lo_[j] = hi_[j];
        fix_column(j, hi_[j]);
        changed = true;
      }
    }
  }

  // Coefficient tightening. A row p*x + q*y <= h with x continuous (p > 0)
  // and y binary (q < 0) caps x at (h - q) / p when y = 1. If the other rows
  // already bound x below that, q can be raised so the cap matches, which
  // cuts off fractional points without removing any integer one.
  if (!presolve_infeasible_) {
    std::vector<double> implied_hi(hi_);
    for (int i = 0; i < m; ++i) {
      if (!row_alive[i]) continue;
      for (const auto& target : rows[i]) {
        const int j = target.index;
        if (!col_alive[j] || integer[j]) continue;
        // x_j <= (side - extreme activity of the others) / coef
        const bool use_hi = target.coef > 0 ? std::isfinite(row_hi[i]) : std::isfinite(row_lo[i]);
        if (!use_hi) continue;
        double rest = 0.0;
        for (const auto& e : rows[i]) {
          if (e.index == j || !col_alive[e.index]) continue;
          const double a = e.coef * lo_[e.index], b = e.coef * hi_[e.index];
          rest += target.coef > 0 ? std::min(a, b) : std::max(a, b);
        }
        if (!std::isfinite(rest)) continue;
        const double side = target.coef > 0 ? row_hi[i] : row_lo[i];
        implied_hi[j] = std::min(implied_hi[j], (side - rest) / target.coef);
      }
    }
    for (int i = 0; i < m; ++i) {
      if (!row_alive[i] || std::isfinite(row_lo[i]) || !std::isfinite(row_hi[i])) continue;
      std::vector<Entry*> live;
      for (auto& e : rows[i]) {
        if (col_alive[e.index]) live.push_back(&e);
      }
      if (live.size() != 2) continue;
      Entry* x = live[0];
      Entry* y = live[1];
      if (integer[x->index]) std::swap(x, y);
      if (integer[x->index] || !integer[y->index] || x->coef <= 0 || y->coef >= 0) continue;
      if (lo_[x->index] < 0 || hi_[y->index] < 1) continue;
      const double cap = implied_hi[x->index];
      if (!std::isfinite(cap)) continue;
      const double q = row_hi[i] - x->coef * cap;
      if (q >= 0 || q <= y->coef + kPresolveTol * std::abs(y->coef)) continue;
      y->coef = q;
      for (auto& e : cols[y->index]) {
        if (e.index == i) e.coef = q;
      }
    }
  }

  to_reduced_.assign(n, -1);
  if (presolve_infeasible_) return;

  std::vector<int> row_map(m, -1);
  int m_red = 0;
  for (int i = 0; i < m; ++i) {
    if (row_alive[i]) row_map[i] = m_red++;
  }
  for (int j = 0; j < n; ++j) {
    if (!col_alive[j]) continue;
    to_reduced_[j] = static_cast<int>(to_original_.size());
    to_original_.push_back(j);
  }
  const int n_red = static_cast<int>(to_original_.size());

  // Geometric-mean scaling by powers of two.
  std::vector<double> row_scale(m_red, 1.0);
  col_scale_.assign(n_red, 1.0);
  for (int pass = 0; pass < 6; ++pass) {
    std::vector<double> rmin(m_red, kInfinity), rmax(m_red, 0.0);
    for (int k = 0; k < n_red; ++k) {
      for (const auto& e : cols[to_original_[k]]) {
        const int r = row_map[e.index];
        if (r < 0) continue;
        const double v = std::abs(e.coef) * col_scale_[k];
        rmin[r] = std::min(rmin[r], v);
        rmax[r] = std::max(rmax[r], v);
      }
    }
    for (int r = 0; r < m_red; ++r) {
      if (rmax[r] > 0) row_scale[r] = power_of_two(1.0 / std::sqrt(rmin[r] * rmax[r]));
    }
    for (int k = 0; k < n_red; ++k) {
      const int j = to_original_[k];
      if (integer[j]) continue;
      double cmin = kInfinity, cmax = 0.0;
      for (const auto& e : cols[j]) {
        const int r = row_map[e.index];
        if (r < 0) continue;
        const double v = std::abs(e.coef) * row_scale[r];
        cmin = std::min(cmin, v);
        cmax = std::max(cmax, v);
      }
      if (cmax > 0) col_scale_[k] = power_of_two(1.0 / std::sqrt(cmin * cmax));
    }
  }

  SparseLp lp;
  lp.num_rows = m_red;
  lp.num_cols = n_red;
  lp.row_lo.resize(m_red);
  lp.row_hi.resize(m_red);
  for (int i = 0; i < m; ++i) {
    const int r = row_map[i];
    if (r < 0) continue;
    lp.row_lo[r] = row_lo[i] * row_scale[r];
    lp.row_hi[r] = row_hi[i] * row_scale[r];
  }
  for (int k = 0; k < n_red; ++k) {
    const int j = to_original_[k];
    const double cs = col_scale_[k];
    lp.cost.push_back(cost[j] * cs);
    lp.col_lo.push_back(lo_[j] / cs);
    lp.col_hi.push_back(hi_[j] / cs);
    for (const auto& e : cols[j]) {
      const int r = row_map[e.index];
      if (r < 0) continue;
      lp.row_index.push_back(r);
      lp.value.push_back(e.coef * row_scale[r] * cs);
    }
    lp.col_start.push_back(static_cast<int>(lp.row_index.size()));
  }
  simplex_ = std::make_unique<Simplex>(std::move(lp));
}

void LpEngine::set_bounds(int var, double lo, double hi) {
  const int k = to_reduced_[var];
  simplex_->set_col_bounds(k, lo / col_scale_[k], hi / col_scale_[k]);
}

void LpEngine::reset_bounds() {
  if (!simplex_) return;
  for (std::size_t k = 0; k < to_original_.size(); ++k) {
    const int j = to_original_[k];
    simplex_->set_col_bounds(static_cast<int>(k), lo_[j] / col_scale_[k], hi_[j] / col_scale_[k]);
  }
}

LpStatus LpEngine::solve(const Basis* warm) {
  if (presolve_infeasible_) return LpStatus::kInfeasible;
  switch (simplex_->solve(warm)) {
    case SimplexResult::kOptimal: return LpStatus::kOptimal;
    case SimplexResult::kInfeasible: return LpStatus::kInfeasible;
    case SimplexResult::kUnbounded: return LpStatus::kUnbounded;
  }
  return LpStatus::kInfeasible;
}

std::vector<double> LpEngine::values() const {
  std::vector<double> x(fixed_value_);
  const auto xr = simplex_->primal();
  const auto& lp = simplex_->lp();
  for (std::size_t k = 0; k < to_original_.size(); ++k) {
    const int j = to_original_[k];
    const double lo = lp.col_lo[k] * col_scale_[k];
    const double hi = lp.col_hi[k] * col_scale_[k];
    x[j] = std::clamp(xr[k] * col_scale_[k], lo, hi);
  }
  return x;
}

double LpEngine::objective() const {
  const auto x = values();
  double obj = 0.0;
  for (const auto& t : objective_terms_) obj += t.coef * x[t.var];
  return obj;
}

}  // namespace satca::detail
