#include "satca/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "lp_engine.hpp"
#include "satca/lp.hpp"

namespace satca {

std::string to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kFeasible: return "feasible";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double relative_gap(double bound, double objective) {
  return (bound - objective) / std::max(std::abs(bound), 1.0);
}

struct Fixing {
  int var;
  int value;
};

// A row made only of binary variables, normalised to sum(coef * x) <= rhs.
struct BinaryRow {
  std::vector<LinearTerm> terms;
  double rhs;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = 0.0;  // in maximisation sense
  std::vector<Fixing> fixings;
  std::shared_ptr<const detail::Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& p, const SolverParams& params, std::ostream* log)
      : p_(p), params_(params), log_(log), engine_(p), sign_(p.maximize ? 1.0 : -1.0) {
    for (int j = 0; j < static_cast<int>(p.variables.size()); ++j) {
      if (p.variables[j].integrality == Integrality::kBinary && engine_.reduced_index(j) >= 0) {
        binaries_.push_back(j);
      }
    }
    collect_binary_rows();
  }

  MilpSolution run(const std::vector<std::vector<double>>& starts) {
    const auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      return dt.count() > params_.time_limit_s;
    };

    MilpSolution out;
    if (engine_.infeasible_at_presolve()) return finish(out, /*exhausted=*/true);
    for (const auto& point : starts) {
      if (point.size() != p_.variables.size()) throw std::invalid_argument("branch_and_bound: start has wrong length");
      std::vector<int> assignment(binaries_.size());
      for (std::size_t k = 0; k < binaries_.size(); ++k) assignment[k] = point[binaries_[k]] >= 0.5 ? 1 : 0;
      try_incumbent(assignment, nullptr);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::optional<Node> current = Node{next_id_++, 0, std::numeric_limits<double>::infinity(), {}, {}};
    bool root = true;
    bool timed_out = false;

    while (current || !open.empty()) {
      if (out_of_time() || (params_.node_limit && nodes_ >= *params_.node_limit)) {
        timed_out = true;
        if (current) open.push(std::move(*current));
        break;
      }
      Node node;
      if (current) {
        node = std::move(*current);
        current.reset();
      } else {
        node = open.top();
        open.pop();
      }
      if (prunable(node.bound)) {
        pruned_bound_ = std::max(pruned_bound_, node.bound);
        continue;
      }

      apply(node.fixings);
      const LpStatus st = engine_.solve(node.basis.get());
      ++nodes_;
      if (st == LpStatus::kUnbounded) throw std::runtime_error("branch_and_bound: relaxation is unbounded");
      if (st == LpStatus::kInfeasible) {
        log_node(node, kNegInf);
        if (root) return finish(out, true);
        continue;
      }
      const double bound = sign_ * engine_.objective();
      if (root) {
        out.root_bound = sign_ * bound;
        root = false;
      }
      log_node(node, bound);
      if (prunable(bound)) {
        pruned_bound_ = std::max(pruned_bound_, bound);
        continue;
      }

      const auto x = engine_.values();
      auto basis = std::make_shared<const detail::Basis>(engine_.basis());

      int branch_var = -1;
      double best_frac = kIntegralityTol;
      for (int j : binaries_) {
        const double frac = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
        if (frac > best_frac) {
          best_frac = frac;
          branch_var = j;
        }
      }

      // Greedy rounding raises a superset of the binaries nearest rounding
      // raises whenever the binary-only rows allow it; raising a binary only
      // relaxes the LP, so nearest rounding is tried only when that fails.
      const auto greedy = greedy_rounding(x);
      try_incumbent(greedy, basis.get());
      bool covered = true;
      for (std::size_t k = 0; k < binaries_.size() && covered; ++k) {
        covered = x[binaries_[k]] < 0.5 || greedy[k] == 1;
      }
      if (!covered) {
        std::vector<int> nearest(binaries_.size());
        for (std::size_t k = 0; k < binaries_.size(); ++k) nearest[k] = x[binaries_[k]] >= 0.5 ? 1 : 0;
        try_incumbent(nearest, basis.get());
      }
      if (has_incumbent_) {
        const auto guided = guided_flips(x);
        if (guided != greedy && guided != incumbent_assignment_) try_incumbent(guided, basis.get());
      }
      if (branch_var < 0) continue;
      if (prunable(bound)) {
        pruned_bound_ = std::max(pruned_bound_, bound);
        continue;
      }

      const int preferred = x[branch_var] >= 0.5 ? 1 : 0;
      for (int value : {preferred, 1 - preferred}) {
        Node child{next_id_++, node.depth + 1, bound, node.fixings, basis};
        child.fixings.push_back({branch_var, value});
        if (value == preferred) {
          current = std::move(child);
        } else {
          open.push(std::move(child));
        }
      }
    }

    if (timed_out) {
      double open_bound = pruned_bound_;
      while (!open.empty()) {
        open_bound = std::max(open_bound, open.top().bound);
        open.pop();
      }
      pruned_bound_ = open_bound;
    }
    return finish(out, !timed_out);
  }

 private:
  bool prunable(double bound) const {
    return has_incumbent_ && relative_gap(bound, incumbent_obj_) <= params_.mip_gap;
  }

  void apply(const std::vector<Fixing>& fixings) {
    engine_.reset_bounds();
    for (const auto& f : fixings) engine_.set_bounds(f.var, f.value, f.value);
  }

  void collect_binary_rows() {
    const int n = static_cast<int>(p_.variables.size());
    std::vector<bool> is_binary(n, false);
    for (int j = 0; j < n; ++j) is_binary[j] = p_.variables[j].integrality == Integrality::kBinary;
    std::vector<int> slot(n, -1);
    for (std::size_t k = 0; k < binaries_.size(); ++k) slot[binaries_[k]] = static_cast<int>(k);
    row_of_binary_.assign(binaries_.size(), {});
    for (const auto& c : p_.constraints) {
      const bool all_binary =
          std::all_of(c.terms.begin(), c.terms.end(), [&](const LinearTerm& t) { return is_binary[t.var]; });
      if (!all_binary) continue;
      for (double sign : {1.0, -1.0}) {
        if (sign > 0 && c.sense == Sense::kGreaterEqual) continue;
        if (sign < 0 && c.sense == Sense::kLessEqual) continue;
        BinaryRow row{{}, sign * c.rhs};
        for (const auto& t : c.terms) {
          if (slot[t.var] < 0) {
            row.rhs -= sign * t.coef * engine_.fixed_value(t.var);
          } else {
            row.terms.push_back({slot[t.var], sign * t.coef});
          }
        }
        const int id = static_cast<int>(binary_rows_.size());
        for (const auto& t : row.terms) row_of_binary_[t.var].push_back(id);
        binary_rows_.push_back(std::move(row));
      }
    }
  }

  // Raises binaries to 1 in decreasing order of their relaxation value,
  // skipping any raise that would break a row made only of binaries.
  std::vector<int> greedy_rounding(const std::vector<double>& x) const {
    std::vector<int> order;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      if (x[binaries_[k]] > kIntegralityTol && engine_.upper(binaries_[k]) >= 1.0) order.push_back(static_cast<int>(k));
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return x[binaries_[a]] > x[binaries_[b]]; });
    std::vector<double> activity(binary_rows_.size(), 0.0);
    std::vector<int> assignment(binaries_.size(), 0);
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      if (engine_.lower(binaries_[k]) < 1.0) continue;
      assignment[k] = 1;
      for (int r : row_of_binary_[k]) activity[r] += coef_in(r, static_cast<int>(k));
    }
    for (int k : order) {
      if (assignment[k]) continue;
      bool fits = true;
      for (int r : row_of_binary_[k]) {
        const double coef = coef_in(r, k);
        if (coef > 0 && activity[r] + coef > binary_rows_[r].rhs + 1e-9) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      assignment[k] = 1;
      for (int r : row_of_binary_[k]) activity[r] += coef_in(r, k);
    }
    return assignment;
  }

  // Starts from the incumbent and flips the binaries whose relaxation value
  // is furthest from it, keeping every binary-only row satisfied.
  std::vector<int> guided_flips(const std::vector<double>& x) const {
    std::vector<int> assignment = incumbent_assignment_;
    std::vector<double> activity(binary_rows_.size(), 0.0);
    for (std::size_t r = 0; r < binary_rows_.size(); ++r) {
      for (const auto& t : binary_rows_[r].terms) activity[r] += t.coef * assignment[t.var];
    }
    std::vector<int> order;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      if (std::abs(x[binaries_[k]] - assignment[k]) > kIntegralityTol) order.push_back(static_cast<int>(k));
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(x[binaries_[a]] - assignment[a]) > std::abs(x[binaries_[b]] - assignment[b]);
    });
    // A drop can make room for a later raise, so sweep until nothing moves.
    std::vector<bool> done(binaries_.size(), false);
    for (bool moved = true; moved;) {
      moved = false;
      for (int k : order) {
        if (done[k]) continue;
        const int j = binaries_[k];
        const int target = 1 - assignment[k];
        if (target < engine_.lower(j) || target > engine_.upper(j)) continue;
        const double step = target - assignment[k];
        bool fits = true;
        for (int r : row_of_binary_[k]) {
          if (activity[r] + step * coef_in(r, k) > binary_rows_[r].rhs + 1e-9) {
            fits = false;
            break;
          }
        }
        if (!fits) continue;
        assignment[k] = target;
        for (int r : row_of_binary_[k]) activity[r] += step * coef_in(r, k);
        done[k] = true;
        moved = true;
      }
    }
    return assignment;
  }

  double coef_in(int row, int k) const {
    double v = 0.0;
    for (const auto& t : binary_rows_[row].terms)
      if (t.var == k) v += t.coef;
    return v;
  }

  void try_incumbent(const std::vector<int>& assignment, const detail::Basis* warm) {
    engine_.reset_bounds();
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      const int j = binaries_[k];
      const double v = assignment[k];
      if (v < engine_.lower(j) || v > engine_.upper(j)) return;
      engine_.set_bounds(j, v, v);
    }
    if (engine_.solve(warm) != LpStatus::kOptimal) return;
    const double obj = sign_ * engine_.objective();
    if (has_incumbent_ && obj <= incumbent_obj_) return;
    auto values = engine_.values();
    if (max_row_violation(p_, values) > kFeasibilityTol) return;
    has_incumbent_ = true;
    incumbent_obj_ = obj;
    incumbent_ = std::move(values);
    incumbent_assignment_ = assignment;
  }

  void log_node(const Node& node, double bound) {
    if (!log_) return;
    *log_ << "node " << node.id << " depth " << node.depth << " bound " << sign_ * bound << " incumbent ";
    if (has_incumbent_) {
      *log_ << sign_ * incumbent_obj_;
    } else {
      *log_ << "none";
    }
    *log_ << "\n";
  }

  MilpSolution finish(MilpSolution out, bool exhausted) {
    out.nodes = nodes_;
    out.lp_iterations = engine_.iterations();
    if (!has_incumbent_) {
      out.status = exhausted ? MilpStatus::kInfeasible : MilpStatus::kTimeLimit;
      return out;
    }
    const double bound = std::max(incumbent_obj_, pruned_bound_);
    out.values = incumbent_;
    out.objective = sign_ * incumbent_obj_;
    out.bound = sign_ * bound;
    out.gap = relative_gap(bound, incumbent_obj_);
    out.status = exhausted ? MilpStatus::kOptimal : MilpStatus::kFeasible;
    return out;
  }

  const MilpProblem& p_;
  const SolverParams& params_;
  std::ostream* log_;
  detail::LpEngine engine_;
  double sign_;
  std::vector<int> binaries_;
  std::vector<BinaryRow> binary_rows_;  // terms index into binaries_
  std::vector<std::vector<int>> row_of_binary_;
  long next_id_ = 0;
  long nodes_ = 0;
  bool has_incumbent_ = false;
  double incumbent_obj_ = kNegInf;
  double pruned_bound_ = kNegInf;
  std::vector<double> incumbent_;
  std::vector<int> incumbent_assignment_;  // binaries_ order
};

}  // namespace

MilpSolution branch_and_bound(const MilpProblem& p, const SolverParams& params, std::ostream* node_log,
                              const std::vector<std::vector<double>>& starts) {
  p.check();
  BranchAndBound bnb(p, params, node_log);
  return bnb.run(starts);
}

MilpSolution enumerate_oracle(const MilpProblem& p, int max_free_binaries) {
  p.check();
  const int n = static_cast<int>(p.variables.size());
  std::vector<int> free;
  std::vector<double> fixed(n, 0.0);
  std::vector<bool> is_binary(n, false);
  for (int j = 0; j < n; ++j) {
    const auto& v = p.variables[j];
    if (v.integrality != Integrality::kBinary) continue;
    is_binary[j] = true;
    const double lo = std::ceil(std::max(v.lower, 0.0));
    const double hi = std::floor(std::min(v.upper, 1.0));
    if (lo > hi) {
      MilpSolution none;
      none.status = MilpStatus::kInfeasible;
      return none;
    }
    if (lo < hi) {
      free.push_back(j);
    } else {
      fixed[j] = lo;
    }
  }
  if (static_cast<int>(free.size()) > max_free_binaries) {
    throw std::invalid_argument("enumerate_oracle: too many free binary variables (" +
                                std::to_string(free.size()) + ")");
  }

  std::vector<const Constraint*> binary_rows;
  for (const auto& c : p.constraints) {
    const bool all_binary = std::all_of(c.terms.begin(), c.terms.end(),
                                        [&](const LinearTerm& t) { return is_binary[t.var]; });
    if (all_binary) binary_rows.push_back(&c);
  }

  const double sign = p.maximize ? 1.0 : -1.0;
  MilpSolution best;
  best.status = MilpStatus::kInfeasible;
  double best_obj = kNegInf;
  MilpProblem residual = p;
  std::vector<double> assign = fixed;

  const unsigned long count = 1UL << free.size();
  for (unsigned long mask = 0; mask < count; ++mask) {
    for (std::size_t k = 0; k < free.size(); ++k) assign[free[k]] = (mask >> k) & 1UL ? 1.0 : 0.0;
    bool ok = true;
    for (const auto* row : binary_rows) {
      double act = 0.0;
      for (const auto& t : row->terms) act += t.coef * assign[t.var];
      if ((row->sense != Sense::kGreaterEqual && act > row->rhs + 1e-9) ||
          (row->sense != Sense::kLessEqual && act < row->rhs - 1e-9)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (int j = 0; j < n; ++j) {
      if (!is_binary[j]) continue;
      residual.variables[j].lower = residual.variables[j].upper = assign[j];
    }
    const auto lp = solve_lp(residual);
    ++best.nodes;
    best.lp_iterations += lp.iterations;
    if (lp.status == LpStatus::kUnbounded) throw std::runtime_error("enumerate_oracle: unbounded residual LP");
    if (lp.status != LpStatus::kOptimal) continue;
    if (sign * lp.objective > best_obj) {
      best_obj = sign * lp.objective;
      best.values = lp.values;
      best.objective = lp.objective;
    }
  }
  if (best.has_incumbent()) {
    best.status = MilpStatus::kOptimal;
    best.bound = best.objective;
    best.gap = 0.0;
  }
  return best;
}

}  // namespace satca
