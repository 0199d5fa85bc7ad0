#include "satca/alloc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "satca/linkbudget.hpp"
#include "satca/milp.hpp"

namespace satca {

namespace {

std::string join_violations(const std::vector<Violation>& v) {
  std::string out = "invalid scenario";
  for (const auto& x : v) out += "\n  " + x.to_string();
  return out;
}

void require_valid(const Scenario& s) {
  auto v = validate_scenario(s);
  if (!v.empty()) throw ValidationError(std::move(v));
}

// Phase-2 objective weight: sum of supplies in Mbit/s.
constexpr double kSupplyWeight = 1e-6;

}  // namespace

ValidationError::ValidationError(std::vector<Violation> v)
    : std::invalid_argument(join_violations(v)), violations_(std::move(v)) {}

Metrics compute_metrics(std::span<const double> demands, std::span<const double> supplies) {
  if (demands.size() != supplies.size()) throw std::invalid_argument("compute_metrics: length mismatch");
  Metrics m;
  m.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < demands.size(); ++u) {
    const double d = demands[u];
    const double s = supplies[u];
    m.unmet_bps += std::max(0.0, d - s);
    m.unused_bps += std::max(0.0, s - d);
    if (d > 0) m.min_ratio = std::min(m.min_ratio, s / d);
  }
  return m;
}

namespace {

void finish_metrics(AllocationResult& r, const Scenario& s) {
  const auto d = s.demands();
  const auto m = compute_metrics(d, r.supply_bps);
  r.unmet_bps = m.unmet_bps;
  r.unused_bps = m.unused_bps;
  if (s.prev_association) r.swap_count = swap_distance(to_association(*s.prev_association), r.association);
}

std::vector<double> supplies_from(const LambdaMatrix& lambda, const RateMatrix& r) {
  std::vector<double> s(lambda.cols(), 0.0);
  for (std::size_t c = 0; c < lambda.rows(); ++c)
    for (std::size_t u = 0; u < lambda.cols(); ++u) s[u] += lambda(c, u) * r(c, u);
  return s;
}

// Largest demands first, each onto the eligible carrier(s) with the most
// spare bit rate for that user. Premium users spill onto a second carrier.
std::vector<double> greedy_start(const Scenario& s, const RateMatrix& r, const IndexMap& ix) {
  const int nc = static_cast<int>(s.num_carriers());
  const int nu = static_cast<int>(s.num_users());
  const auto d = s.demands();
  std::vector<double> x(ix.size(), 0.0);
  std::vector<double> spare(nc, 1.0);
  std::vector<int> order(nu);
  for (int u = 0; u < nu; ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });
  for (int u : order) {
    if (d[u] <= 0.0) continue;
    std::vector<int> cand;
    for (int c = 0; c < nc; ++c)
      if (r(c, u) > 0.0) cand.push_back(c);
    std::stable_sort(cand.begin(), cand.end(),
                     [&](int a, int b) { return spare[a] * r(a, u) > spare[b] * r(b, u); });
    const int limit = std::min(s.users[u].max_carriers, s.delta_max);
    double need = d[u];
    for (int k = 0; k < static_cast<int>(cand.size()) && k < limit && need > 0.0; ++k) {
      const int c = cand[k];
      const bool last = k + 1 == limit || k + 1 == static_cast<int>(cand.size());
      const double take = last ? need / r(c, u) : std::min(spare[c], need / r(c, u));
      x[ix.a(c, u)] = 1.0;
      spare[c] = std::max(0.0, spare[c] - take);
      need -= take * r(c, u);
    }
  }
  return x;
}

}  // namespace

AllocationResult allocate_ca(const Scenario& s, std::ostream* node_log) {
  require_valid(s);
  const auto start = std::chrono::steady_clock::now();
  const RateMatrix r = effective_rate_matrix(s);
  const std::size_t nc = s.num_carriers();
  const std::size_t nu = s.num_users();

  AllocationResult out;
  out.method = "ca";
  out.association = AssociationMatrix(nc, nu, 0);
  out.fill_rate = FillRateMatrix(nc, nu, 0.0);
  out.lambda = LambdaMatrix(nc, nu, 0.0);
  out.supply_bps.assign(nu, 0.0);

  const auto d = s.demands();
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
    out.psi = 1.0;
    if (s.prev_association) {
      // Keeping the previous association is the cheapest choice and
      // supplies nothing, which is all a zero-demand epoch needs.
      out.association = to_association(*s.prev_association);
    }
    finish_metrics(out, s);
    return out;
  }

  const MilpProblem p = build_milp(s, r);
  // The previous association always satisfies the swap budget, so it is a
  // safe first incumbent.
  std::vector<std::vector<double>> starts{greedy_start(s, r, p.index)};
  if (s.prev_association) {
    std::vector<double> x(p.index.size(), 0.0);
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t u = 0; u < nu; ++u)
        x[p.index.a(static_cast<int>(c), static_cast<int>(u))] = (*s.prev_association)(c, u);
    starts.push_back(std::move(x));
  }
  MilpSolution sol = branch_and_bound(p, s.solver, node_log, starts);
  if (!sol.has_incumbent()) {
    throw AllocationError(sol.status, "carrier-aggregation MILP ended " + to_string(sol.status));
  }
  out.psi = sol.objective;
  out.status = sol.status;
  out.gap = sol.gap;
  out.nodes = sol.nodes;

  if (s.solver.lexicographic_phase2) {
    MilpProblem p2 = p;
    const int psi = p.index.psi();
    p2.variables[psi].lower = std::max(0.0, sol.objective - s.solver.mip_gap);
    for (std::size_t u = 0; u < nu; ++u) {
      auto& v = p2.variables[p.index.s(static_cast<int>(u))];
      v.upper = std::min(v.upper, d[u]);
    }
    p2.objective.clear();
    for (std::size_t u = 0; u < nu; ++u) p2.objective.push_back({p.index.s(static_cast<int>(u)), kSupplyWeight});
    SolverParams params2 = s.solver;
    const std::chrono::duration<double> used = std::chrono::steady_clock::now() - start;
    params2.time_limit_s = std::max(1e-3, s.solver.time_limit_s - used.count());
    MilpSolution sol2 = branch_and_bound(p2, params2, node_log, {sol.values});
    out.nodes += sol2.nodes;
    if (sol2.has_incumbent()) {
      sol.values = std::move(sol2.values);
      if (sol2.status != MilpStatus::kOptimal) {
        out.status = MilpStatus::kFeasible;
        out.warnings.push_back("second phase stopped at a search limit with gap " + std::to_string(sol2.gap));
      }
    } else {
      out.warnings.push_back("second phase ended " + to_string(sol2.status) + "; keeping first-phase point");
    }
  }

  const auto& ix = p.index;
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t u = 0; u < nu; ++u) {
      const int ci = static_cast<int>(c);
      const int ui = static_cast<int>(u);
      const int a = sol.values[ix.a(ci, ui)] >= 0.5 ? 1 : 0;
      const double l = a ? std::clamp(sol.values[ix.lambda(ci, ui)], 0.0, 1.0) : 0.0;
      out.association(c, u) = a;
      out.lambda(c, u) = l;
      out.fill_rate(c, u) = l;
    }
  }
  out.supply_bps = supplies_from(out.lambda, r);
  if (s.solver.no_oversupply) {
    // Trim round-off so that s_u <= d_u holds exactly.
    for (std::size_t u = 0; u < nu; ++u) {
      if (out.supply_bps[u] <= d[u]) continue;
      const double k = d[u] / out.supply_bps[u];
      for (std::size_t c = 0; c < nc; ++c) {
        out.lambda(c, u) *= k;
        out.fill_rate(c, u) = out.lambda(c, u);
      }
    }
    out.supply_bps = supplies_from(out.lambda, r);
    for (std::size_t u = 0; u < nu; ++u) out.supply_bps[u] = std::min(out.supply_bps[u], d[u]);
  }
  finish_metrics(out, s);
  return out;
}

AllocationResult allocate_baseline_no_ca(const Scenario& s) {
  require_valid(s);
  const RateMatrix r = effective_rate_matrix(s);
  const std::size_t nc = s.num_carriers();
  const std::size_t nu = s.num_users();
  const auto d = s.demands();

  AllocationResult out;
  out.method = "baseline";
  out.association = AssociationMatrix(nc, nu, 0);
  out.fill_rate = FillRateMatrix(nc, nu, 0.0);
  out.lambda = LambdaMatrix(nc, nu, 0.0);

  std::vector<int> attached(nu, -1);
  for (std::size_t u = 0; u < nu; ++u) {
    double best = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      if (r(c, u) > best) {
        best = r(c, u);
        attached[u] = static_cast<int>(c);
      }
    }
    if (attached[u] < 0) {
      out.warnings.push_back("user " + std::to_string(s.users[u].id) + " has no eligible carrier");
    } else {
      out.association(attached[u], u) = 1;
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    double load = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      if (attached[u] == static_cast<int>(c)) load += d[u];
    }
    if (load <= 0.0) continue;
    for (std::size_t u = 0; u < nu; ++u) {
      if (attached[u] != static_cast<int>(c)) continue;
      out.fill_rate(c, u) = d[u] / load;
      out.lambda(c, u) = out.fill_rate(c, u);
    }
  }
  out.supply_bps = supplies_from(out.lambda, r);
  const auto m = compute_metrics(d, out.supply_bps);
  out.psi = std::isfinite(m.min_ratio) ? m.min_ratio : 1.0;
  finish_metrics(out, s);
  return out;
}

EvolutionTrace evolve(const Scenario& s, const std::vector<std::vector<double>>& profiles,
                      std::optional<int> q) {
  if (profiles.size() < 2) throw std::invalid_argument("evolve: need at least two demand profiles");
  for (const auto& p : profiles) {
    if (p.size() != s.num_users()) throw std::invalid_argument("evolve: profile length differs from user count");
  }
  EvolutionTrace trace;
  trace.swap_budget_q = q;

  Scenario epoch = s;
  epoch.prev_association.reset();
  epoch.solver.swap_budget_q.reset();
  for (std::size_t t = 0; t < profiles.size(); ++t) {
    for (std::size_t u = 0; u < s.num_users(); ++u) epoch.users[u].demand_bps = profiles[t][u];
    if (t > 0) {
      const auto& prev = trace.epochs.back().result.association;
      Matrix<double> pa(prev.rows(), prev.cols());
      for (std::size_t k = 0; k < prev.data().size(); ++k) pa.data()[k] = prev.data()[k];
      epoch.prev_association = std::move(pa);
      epoch.solver.swap_budget_q = q;
    }
    try {
      trace.epochs.push_back({profiles[t], allocate_ca(epoch)});
    } catch (const AllocationError& e) {
      trace.error = "epoch " + std::to_string(t) + ": " + e.what();
      break;
    }
  }
  return trace;
}

}  // namespace satca
