#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "owen/rational.hpp"

namespace owen {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };

struct Term {
  int var;
  Rational coef;
};

struct Variable {
  std::string name;
  bool free = false;  // otherwise x >= 0
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::string name;
};

class LinearProgram {
 public:
  int add_variable(std::string name = {}, bool free = false);
  int add_constraint(Constraint c);
  int add_constraint(std::vector<Term> terms, Relation relation, Rational rhs,
                     std::string name = {});
  void set_objective(Sense sense, std::vector<Term> terms);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  const Variable& variable(int i) const { return variables_[i]; }
  const Constraint& constraint(int i) const { return constraints_[i]; }
  std::span<const Constraint> constraints() const { return constraints_; }
  std::span<const Variable> variables() const { return variables_; }
  Sense sense() const { return sense_; }
  const std::vector<Term>& objective() const { return objective_; }

  // Throws MalformedModel on out-of-range variable indices.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  Sense sense_ = Sense::Minimize;
};

Rational evaluate(std::span<const Term> terms, std::span<const Rational> point);

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Duals are shadow prices of the model's own objective: objective equals
// sum(rhs * dual). For a maximization, <= rows carry dual >= 0 and >= rows
// dual <= 0; a minimization flips both signs.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  Rational objective;
  std::vector<Rational> ray;  // improving direction when Unbounded
  int rounds = 0;             // constraint generation rounds
};

LpSolution solve(const LinearProgram& lp);

struct FeasibilityOk {};
struct FeasibilityViolated {
  int constraint;
  Rational slack;  // negative amount by which the row is violated
};
using FeasibilityVerdict = std::variant<FeasibilityOk, FeasibilityViolated>;

// Checks every constraint and the sign of non-free variables. A violated
// sign bound is reported with constraint index -1 - var.
FeasibilityVerdict check_feasibility(const LinearProgram& lp,
                                     std::span<const Rational> point);

// Receives the current optimum (or an improving ray when the relaxation is
// unbounded, with `is_ray` set) and returns violated constraints, or nothing
// when the point is feasible. For a ray the returned rows are read as their
// homogeneous part.
using SeparationOracle = std::function<std::vector<Constraint>(
    std::span<const Rational> point, bool is_ray)>;

// Constraint generation. Generated constraints are appended to `lp`, so on
// return the solution's duals index lp's constraint list.
LpSolution solve_with_separation(LinearProgram& lp,
                                 const SeparationOracle& oracle,
                                 int max_rounds = 1000);

}  // namespace owen
