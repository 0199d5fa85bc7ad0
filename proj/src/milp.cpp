#include "satca/milp.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace satca {

IndexMap::Entry IndexMap::decode(int var) const {
  const int block = nc_ * nu_;
  if (var < 0 || var >= size()) throw std::out_of_range("IndexMap::decode");
  if (var < 3 * block) {
    const int k = var / block;
    const int rem = var % block;
    const auto kind = k == 0 ? VariableKind::kAssociation
                      : k == 1 ? VariableKind::kFillRate
                               : VariableKind::kLambda;
    return {kind, rem / nu_, rem % nu_};
  }
  if (var < 3 * block + nu_) return {VariableKind::kSupply, -1, var - 3 * block};
  return {VariableKind::kPsi, -1, -1};
}

int MilpProblem::add_variable(Variable v) {
  variables.push_back(std::move(v));
  return static_cast<int>(variables.size()) - 1;
}

void MilpProblem::add_constraint(Constraint c) { constraints.push_back(std::move(c)); }

void MilpProblem::check() const {
  const int n = static_cast<int>(variables.size());
  for (const auto& v : variables) {
    if (!(v.lower <= v.upper)) throw std::logic_error("variable " + v.name + " has lower > upper");
  }
  auto check_terms = [n](const std::vector<LinearTerm>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= n) throw std::logic_error(where + " references missing variable");
      if (!std::isfinite(t.coef)) throw std::logic_error(where + " has a non-finite coefficient");
    }
  };
  for (const auto& c : constraints) check_terms(c.terms, "constraint " + c.name);
  check_terms(objective, "objective");
}

namespace {

std::string cu(int c, int u) { return std::to_string(c) + "_" + std::to_string(u); }

}  // namespace

std::vector<Constraint> linearize_product_rows(const IndexMap& ix, int c, int u) {
  const int a = ix.a(c, u);
  const int f = ix.f(c, u);
  const int l = ix.lambda(c, u);
  const auto tag = cu(c, u);
  return {
      {"N1_" + tag, {{l, 1.0}, {a, -1.0}}, Sense::kLessEqual, 0.0},
      {"N2_" + tag, {{l, 1.0}}, Sense::kGreaterEqual, 0.0},
      {"N3_" + tag, {{l, 1.0}, {f, -1.0}}, Sense::kLessEqual, 0.0},
      {"N4_" + tag, {{l, 1.0}, {f, -1.0}, {a, -1.0}}, Sense::kGreaterEqual, -1.0},
  };
}

Constraint linearize_swap_budget(const IndexMap& ix, const AssociationMatrix& prev, int q) {
  if (prev.rows() != static_cast<std::size_t>(ix.num_carriers()) ||
      prev.cols() != static_cast<std::size_t>(ix.num_users())) {
    throw std::invalid_argument("linearize_swap_budget: shape mismatch");
  }
  Constraint row{"C7", {}, Sense::kLessEqual, static_cast<double>(q)};
  for (int c = 0; c < ix.num_carriers(); ++c) {
    for (int u = 0; u < ix.num_users(); ++u) {
      const int p = prev(c, u);
      if (p != 0 && p != 1) throw std::invalid_argument("association must be binary");
      if (p == 0) {
        row.terms.push_back({ix.a(c, u), 1.0});
      } else {
        row.terms.push_back({ix.a(c, u), -1.0});
        row.rhs -= 1.0;
      }
    }
  }
  return row;
}

MilpProblem build_milp(const Scenario& s, const RateMatrix& r) {
  const int nc = static_cast<int>(s.num_carriers());
  const int nu = static_cast<int>(s.num_users());
  if (r.rows() != s.num_carriers() || r.cols() != s.num_users()) {
    throw std::invalid_argument("build_milp: rate matrix shape does not match scenario");
  }

  MilpProblem p;
  p.index = IndexMap(nc, nu);
  const auto& ix = p.index;
  const bool cap = s.solver.no_oversupply;
  p.variables.resize(ix.size());

  for (int c = 0; c < nc; ++c) {
    for (int u = 0; u < nu; ++u) {
      const bool eligible = r(c, u) > 0.0;
      p.variables[ix.a(c, u)] = {"a_" + cu(c, u), 0.0, eligible ? 1.0 : 0.0, Integrality::kBinary};
      p.variables[ix.f(c, u)] = {"f_" + cu(c, u), 0.0, 1.0, Integrality::kContinuous};
      p.variables[ix.lambda(c, u)] = {"l_" + cu(c, u), 0.0, 1.0, Integrality::kContinuous};
    }
  }
  for (int u = 0; u < nu; ++u) {
    const double d = s.users[u].demand_bps;
    p.variables[ix.s(u)] = {"s_" + std::to_string(u), 0.0, cap ? d : kInf, Integrality::kContinuous};
  }
  p.variables[ix.psi()] = {"psi", 0.0, cap ? 1.0 : kInf, Integrality::kContinuous};

  for (int u = 0; u < nu; ++u) {
    Constraint row{"C1_" + std::to_string(u), {{ix.s(u), 1.0}}, Sense::kEqual, 0.0};
    for (int c = 0; c < nc; ++c) {
      if (r(c, u) != 0.0) row.terms.push_back({ix.lambda(c, u), -r(c, u)});
    }
    p.add_constraint(std::move(row));
  }
  for (int u = 0; u < nu; ++u) {
    const double d = s.users[u].demand_bps;
    if (d > 0.0) {
      p.add_constraint({"C2_" + std::to_string(u), {{ix.s(u), 1.0}, {ix.psi(), -d}},
                        Sense::kGreaterEqual, 0.0});
    }
  }
  for (int u = 0; u < nu; ++u) {
    Constraint row{"C3_" + std::to_string(u), {}, Sense::kLessEqual,
                   static_cast<double>(s.users[u].max_carriers)};
    for (int c = 0; c < nc; ++c) row.terms.push_back({ix.a(c, u), 1.0});
    p.add_constraint(std::move(row));
  }
  for (int c = 0; c < nc; ++c) {
    Constraint row{"C4_" + std::to_string(c), {}, Sense::kLessEqual, 1.0};
    for (int u = 0; u < nu; ++u) row.terms.push_back({ix.f(c, u), 1.0});
    p.add_constraint(std::move(row));
  }
  if (s.prev_association && s.solver.swap_budget_q) {
    p.add_constraint(
        linearize_swap_budget(ix, to_association(*s.prev_association), *s.solver.swap_budget_q));
  }
  for (int c = 0; c < nc; ++c) {
    for (int u = 0; u < nu; ++u) {
      for (auto& row : linearize_product_rows(ix, c, u)) p.add_constraint(std::move(row));
    }
  }

  p.objective = {{ix.psi(), 1.0}};
  p.maximize = true;
  return p;
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_terms(std::ostream& os, const std::vector<LinearTerm>& terms, const MilpProblem& p) {
  if (terms.empty()) {
    os << " 0 " << p.variables.front().name;
    return;
  }
  bool first = true;
  for (const auto& t : terms) {
    const double mag = std::abs(t.coef);
    if (t.coef < 0) {
      os << " - ";
    } else if (!first) {
      os << " + ";
    } else {
      os << " ";
    }
    if (mag != 1.0) os << fmt_num(mag) << " ";
    os << p.variables[t.var].name;
    first = false;
  }
}

}  // namespace

void write_lp(std::ostream& os, const MilpProblem& p) {
  os << (p.maximize ? "Maximize\n" : "Minimize\n");
  os << " obj:";
  write_terms(os, p.objective, p);
  os << "\nSubject To\n";
  for (const auto& c : p.constraints) {
    os << " " << c.name << ":";
    write_terms(os, c.terms, p);
    switch (c.sense) {
      case Sense::kLessEqual: os << " <= "; break;
      case Sense::kEqual: os << " = "; break;
      case Sense::kGreaterEqual: os << " >= "; break;
    }
    os << fmt_num(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : p.variables) {
    if (v.lower == v.upper) {
      os << " " << v.name << " = " << fmt_num(v.lower) << "\n";
    } else if (std::isinf(v.upper)) {
      os << " " << v.name << " >= " << fmt_num(v.lower) << "\n";
    } else {
      os << " " << fmt_num(v.lower) << " <= " << v.name << " <= " << fmt_num(v.upper) << "\n";
    }
  }
  bool header = false;
  for (const auto& v : p.variables) {
    if (v.integrality != Integrality::kBinary) continue;
    if (!header) os << "Binary\n";
    header = true;
    os << " " << v.name << "\n";
  }
  os << "End\n";
}

}  // namespace satca
