#include "owen/lp.hpp"

#include <memory>
#include <stdexcept>

#include "owen/errors.hpp"
#include "simplex.hpp"

namespace owen {

int LinearProgram::add_variable(std::string name, bool free) {
  variables_.push_back({std::move(name), free});
  return variable_count() - 1;
}

int LinearProgram::add_constraint(Constraint c) {
  constraints_.push_back(std::move(c));
  return constraint_count() - 1;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Relation relation,
                                  Rational rhs, std::string name) {
  return add_constraint(
      Constraint{std::move(terms), relation, std::move(rhs), std::move(name)});
}

void LinearProgram::set_objective(Sense sense, std::vector<Term> terms) {
  sense_ = sense;
  objective_ = std::move(terms);
}

void LinearProgram::validate() const {
  auto check = [&](const std::vector<Term>& terms, const std::string& where) {
    for (const Term& t : terms)
      if (t.var < 0 || t.var >= variable_count())
        throw MalformedModel(where + " references variable " +
                             std::to_string(t.var));
  };
  check(objective_, "objective");
  for (int i = 0; i < constraint_count(); ++i)
    check(constraints_[i].terms, "constraint " + std::to_string(i));
}

Rational evaluate(std::span<const Term> terms, std::span<const Rational> point) {
  Rational v = 0;
  for (const Term& t : terms) v += t.coef * point[t.var];
  return v;
}

FeasibilityVerdict check_feasibility(const LinearProgram& lp,
                                     std::span<const Rational> point) {
  if (static_cast<int>(point.size()) != lp.variable_count())
    throw DimensionMismatch("point has " + std::to_string(point.size()) +
                            " values, model has " +
                            std::to_string(lp.variable_count()) + " variables");
  for (int j = 0; j < lp.variable_count(); ++j)
    if (!lp.variable(j).free && point[j] < 0)
      return FeasibilityViolated{-1 - j, point[j]};
  for (int i = 0; i < lp.constraint_count(); ++i) {
    const Constraint& c = lp.constraint(i);
    Rational lhs = evaluate(c.terms, point);
    Rational slack;
    switch (c.relation) {
      case Relation::LessEqual: slack = c.rhs - lhs; break;
      case Relation::GreaterEqual: slack = lhs - c.rhs; break;
      case Relation::Equal: slack = lhs == c.rhs ? Rational(0) : -abs(lhs - c.rhs); break;
    }
    if (slack < 0) return FeasibilityViolated{i, slack};
  }
  return FeasibilityOk{};
}

namespace {

// Primal feasibility, dual signs, zero-or-signed reduced costs and equal
// objectives, all exact.
void verify_optimal(const LinearProgram& lp, const LpSolution& s) {
  if (!std::holds_alternative<FeasibilityOk>(check_feasibility(lp, s.primal)))
    throw std::logic_error("simplex returned an infeasible primal");
  bool max = lp.sense() == Sense::Maximize;
  Rational dual_obj = 0;
  std::vector<Rational> reduced(lp.variable_count());
  for (const Term& t : lp.objective()) reduced[t.var] += t.coef;
  for (int i = 0; i < lp.constraint_count(); ++i) {
    const Constraint& c = lp.constraint(i);
    const Rational& y = s.dual[i];
    if ((c.relation == Relation::LessEqual && (max ? y < 0 : y > 0)) ||
        (c.relation == Relation::GreaterEqual && (max ? y > 0 : y < 0)))
      throw std::logic_error("simplex returned a dual of the wrong sign");
    dual_obj += c.rhs * y;
    for (const Term& t : c.terms) reduced[t.var] -= t.coef * y;
  }
  for (int j = 0; j < lp.variable_count(); ++j) {
    bool bad = lp.variable(j).free ? reduced[j] != 0
                                   : (max ? reduced[j] > 0 : reduced[j] < 0);
    if (bad) throw std::logic_error("simplex returned an infeasible dual");
  }
  if (dual_obj != s.objective)
    throw std::logic_error("simplex certificate fails strong duality");
}

bool violated(const Constraint& c, std::span<const Rational> point,
              bool is_ray) {
  Rational lhs = evaluate(c.terms, point);
  Rational rhs = is_ray ? Rational(0) : c.rhs;
  switch (c.relation) {
    case Relation::LessEqual: return lhs > rhs;
    case Relation::GreaterEqual: return lhs < rhs;
    case Relation::Equal: return lhs != rhs;
  }
  return false;
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  lp.validate();
  detail::Simplex sx(lp);
  LpSolution s = sx.run(lp);
  if (s.status == LpStatus::Optimal) verify_optimal(lp, s);
  return s;
}

LpSolution solve_with_separation(LinearProgram& lp,
                                 const SeparationOracle& oracle,
                                 int max_rounds) {
  lp.validate();
  auto sx = std::make_unique<detail::Simplex>(lp);
  LpSolution s = sx->run(lp);
  int rounds = 0;
  while (s.status != LpStatus::Infeasible) {
    bool is_ray = s.status == LpStatus::Unbounded;
    std::span<const Rational> point = is_ray ? s.ray : s.primal;
    std::vector<Constraint> cuts = oracle(point, is_ray);
    if (cuts.empty()) break;
    for (const Constraint& c : cuts)
      if (!violated(c, point, is_ray))
        throw OracleContractViolation("returned constraint '" + c.name +
                                      "' is satisfied by the query point");
    if (rounds >= max_rounds)
      throw RoundLimitExceeded("no convergence after " +
                               std::to_string(max_rounds) + " rounds");
    ++rounds;
    int first = lp.constraint_count();
    for (Constraint& c : cuts) lp.add_constraint(std::move(c));
    lp.validate();
    if (is_ray) {
      sx = std::make_unique<detail::Simplex>(lp);
      s = sx->run(lp);
    } else {
      s = sx->append_rows(lp, first);
    }
  }
  if (s.status == LpStatus::Optimal) verify_optimal(lp, s);
  s.rounds = rounds;
  return s;
}

}  // namespace owen
