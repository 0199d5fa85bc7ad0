#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "satca/model.hpp"

namespace satca {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Integrality { kContinuous, kBinary };

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class VariableKind { kAssociation, kFillRate, kLambda, kSupply, kPsi };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  Integrality integrality = Integrality::kContinuous;

  bool operator==(const Variable&) const = default;
};

struct LinearTerm {
  int var = 0;
  double coef = 0.0;

  bool operator==(const LinearTerm&) const = default;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;

  bool operator==(const Constraint&) const = default;
};

// Variable layout of the carrier-aggregation model: all a(c,u), then all
// f(c,u), then all lambda(c,u) (carrier-major), then s(u), then psi.
class IndexMap {
 public:
  IndexMap() = default;
  IndexMap(int num_carriers, int num_users) : nc_(num_carriers), nu_(num_users) {}

  int num_carriers() const { return nc_; }
  int num_users() const { return nu_; }
  int size() const { return 3 * nc_ * nu_ + nu_ + 1; }

  int a(int c, int u) const { return c * nu_ + u; }
  int f(int c, int u) const { return nc_ * nu_ + c * nu_ + u; }
  int lambda(int c, int u) const { return 2 * nc_ * nu_ + c * nu_ + u; }
  int s(int u) const { return 3 * nc_ * nu_ + u; }
  int psi() const { return 3 * nc_ * nu_ + nu_; }

  struct Entry {
    VariableKind kind;
    int carrier;  // -1 for s and psi
    int user;     // -1 for psi
  };
  Entry decode(int var) const;

  bool operator==(const IndexMap&) const = default;

 private:
  int nc_ = 0;
  int nu_ = 0;
};

// Solver-agnostic linear model. Objective direction is maximisation unless
// `maximize` is false.
struct MilpProblem {
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<LinearTerm> objective;
  bool maximize = true;
  IndexMap index;

  int add_variable(Variable v);
  void add_constraint(Constraint c);

  // Every constraint references only existing variables and every bound
  // pair is ordered. Throws std::logic_error otherwise.
  void check() const;

  bool operator==(const MilpProblem&) const = default;
};

// The four rows that make lambda = a * f exact for binary a and f in [0, 1]:
//   N1: lambda - a <= 0
//   N2: lambda >= 0
//   N3: lambda - f <= 0
//   N4: lambda - f - a >= -1
std::vector<Constraint> linearize_product_rows(const IndexMap& index, int c, int u);

// Swap budget |vec(A) - vec(prev)|_1 <= q as one row. prev entries are
// constants, so |a - 1| = 1 - a and |a - 0| = a; the constant part moves to
// the right-hand side.
Constraint linearize_swap_budget(const IndexMap& index, const AssociationMatrix& prev, int q);

// Builds the max-min carrier-aggregation MILP:
//   C1 s_u - sum_c lambda(c,u) r(c,u) = 0          every user
//   C2 s_u - psi d_u >= 0                          users with d_u > 0
//   C3 sum_c a(c,u) <= max_carriers(u)             every user
//   C4 sum_u f(c,u) <= 1                           every carrier
//   C7 swap budget                                 prev_association and Q given
//   C8 N1..N4                                      every (c, u)
// Fill rates and lambda are bounded to [0, 1], a is binary and fixed to 0
// where r(c,u) = 0. With no_oversupply, psi <= 1 and s_u <= d_u are imposed
// as bounds. Throws std::invalid_argument on a shape mismatch.
MilpProblem build_milp(const Scenario& s, const RateMatrix& r);

// Writes the model in CPLEX LP text format.
void write_lp(std::ostream& os, const MilpProblem& p);

}  // namespace satca
