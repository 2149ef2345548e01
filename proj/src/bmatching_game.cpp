#include "owen/bmatching_game.hpp"

#include <stdexcept>

#include "owen/errors.hpp"

namespace owen {

void validate(const BMatchingInstance& instance) {
  if (instance.left_count < 0 || instance.right_count < 0)
    throw ValidationError("negative side size");
  if (static_cast<int>(instance.b.size()) != instance.agent_count())
    throw ValidationError("expected one b value per vertex");
  for (int b : instance.b)
    if (b < 1) throw ValidationError("b values must be positive integers");
  for (const BEdge& e : instance.edges) {
    if (e.left < 0 || e.left >= instance.left_count || e.right < 0 ||
        e.right >= instance.right_count)
      throw ValidationError("edge endpoint outside its side");
    if (e.weight <= 0) throw ValidationError("edge weights must be positive");
  }
}

BMatchingSolution max_weight_bmatching(const BMatchingInstance& instance) {
  validate(instance);
  LinearProgram lp;
  std::vector<Term> obj;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    int x = lp.add_variable("x" + std::to_string(e));
    obj.push_back({x, instance.edges[e].weight});
  }
  lp.set_objective(Sense::Maximize, obj);
  std::vector<std::vector<Term>> rows(instance.agent_count());
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    const BEdge& edge = instance.edges[e];
    rows[instance.left_agent(edge.left)].push_back({static_cast<int>(e), 1});
    rows[instance.right_agent(edge.right)].push_back({static_cast<int>(e), 1});
  }
  for (int a = 0; a < instance.agent_count(); ++a)
    lp.add_constraint(rows[a], Relation::LessEqual, instance.b[a]);
  LpSolution s = solve(lp);
  if (s.status != LpStatus::Optimal)
    throw std::logic_error("b-matching LP has no optimum");
  BMatchingSolution out;
  out.value = s.objective;
  for (const Rational& x : s.primal) {
    // the bipartite constraint matrix is totally unimodular
    if (x.get_den() != 1)
      throw std::logic_error("fractional basic optimum in a bipartite b-matching");
    out.multiplicity.push_back(x.get_num().get_si());
  }
  out.dual.value = s.dual;
  return out;
}

bool is_feasible_bmatch_dual(const BMatchingInstance& instance,
                             const BMatchDual& dual) {
  if (static_cast<int>(dual.value.size()) != instance.agent_count())
    throw DimensionMismatch("expected one dual value per vertex");
  for (const Rational& x : dual.value)
    if (x < 0) return false;
  for (const BEdge& e : instance.edges)
    if (dual.value[instance.left_agent(e.left)] +
            dual.value[instance.right_agent(e.right)] <
        e.weight)
      return false;
  return true;
}

namespace {

std::vector<Rational> shares_of(const BMatchingInstance& instance,
                                const std::vector<Rational>& dual) {
  std::vector<Rational> p(dual.size());
  for (std::size_t a = 0; a < dual.size(); ++a) p[a] = dual[a] * instance.b[a];
  return p;
}

}  // namespace

std::vector<Rational> owen_from_dual(const BMatchingInstance& instance,
                                     const BMatchDual& dual) {
  if (!is_feasible_bmatch_dual(instance, dual))
    throw NotOptimalDual("dual is infeasible");
  std::vector<Rational> p = shares_of(instance, dual.value);
  Rational value = max_weight_bmatching(instance).value;
  if (sum(p) != value)
    throw NotOptimalDual("dual objective " + to_string(sum(p)) +
                         " differs from the matching value " + to_string(value));
  return p;
}

LeximinProblem bmatching_dual_problem(const BMatchingInstance& instance) {
  validate(instance);
  LeximinProblem p;
  std::vector<Term> obj;
  for (int a = 0; a < instance.agent_count(); ++a) {
    int x = p.base.add_variable(a < instance.left_count
                                    ? "u" + std::to_string(a)
                                    : "v" + std::to_string(a - instance.left_count));
    obj.push_back({x, instance.b[a]});
    p.shares.push_back({{x, instance.b[a]}});
  }
  p.base.set_objective(Sense::Minimize, obj);
  for (const BEdge& e : instance.edges)
    p.base.add_constraint({{instance.left_agent(e.left), 1},
                           {instance.right_agent(e.right), 1}},
                          Relation::GreaterEqual, e.weight);
  return p;
}

std::vector<Rational> leximin_owen(const BMatchingInstance& instance) {
  return leximin(bmatching_dual_problem(instance)).shares;
}

std::vector<Rational> leximax_owen(const BMatchingInstance& instance) {
  return leximax(bmatching_dual_problem(instance)).shares;
}

BMatchMembership check_owen_membership(const BMatchingInstance& instance,
                                       const std::vector<Rational>& profit) {
  validate(instance);
  if (static_cast<int>(profit.size()) != instance.agent_count())
    throw NotAnImputation("expected one share per vertex");
  Rational value = max_weight_bmatching(instance).value;
  if (sum(profit) != value)
    throw NotAnImputation("shares sum to " + to_string(sum(profit)) +
                          ", the game is worth " + to_string(value));
  BMatchDual dual;
  for (int a = 0; a < instance.agent_count(); ++a) {
    if (profit[a] < 0) return {false, std::nullopt, "negative share"};
    dual.value.push_back(profit[a] / instance.b[a]);
  }
  for (const BEdge& e : instance.edges) {
    int l = instance.left_agent(e.left), r = instance.right_agent(e.right);
    if (dual.value[l] + dual.value[r] < e.weight)
      return {false, std::nullopt,
              "implied dual violates edge U" + std::to_string(e.left) + "-V" +
                  std::to_string(e.right)};
  }
  return {true, std::move(dual), {}};
}

DuplicatedInstance duplicate_reduction(const BMatchingInstance& instance,
                                       int bound) {
  validate(instance);
  long total = 0;
  for (int b : instance.b) total += b;
  if (total > bound)
    throw BoundExceeded("sum of b is " + std::to_string(total) +
                        ", above the bound " + std::to_string(bound));
  DuplicatedInstance d;
  std::vector<int> first(instance.agent_count());
  for (int a = 0; a < instance.agent_count(); ++a) {
    first[a] = static_cast<int>(d.origin.size());
    for (int k = 0; k < instance.b[a]; ++k) d.origin.push_back(a);
  }
  int left = 0;
  for (int a = 0; a < instance.left_count; ++a) left += instance.b[a];
  d.expanded.left_count = left;
  d.expanded.right_count = static_cast<int>(d.origin.size()) - left;
  d.expanded.b.assign(d.origin.size(), 1);
  for (const BEdge& e : instance.edges) {
    int l = instance.left_agent(e.left), r = instance.right_agent(e.right);
    for (int i = 0; i < instance.b[l]; ++i)
      for (int j = 0; j < instance.b[r]; ++j)
        d.expanded.edges.push_back(
            {first[l] + i, first[r] + j - left, e.weight});
  }
  return d;
}

DuplicationLeximin leximin_via_duplication(const BMatchingInstance& instance,
                                           int bound) {
  DuplicationLeximin out;
  out.reduction = duplicate_reduction(instance, bound);
  LeximinProblem p = bmatching_dual_problem(out.reduction.expanded);
  p.shares.assign(instance.agent_count(), {});
  for (std::size_t c = 0; c < out.reduction.origin.size(); ++c)
    p.shares[out.reduction.origin[c]].push_back({static_cast<int>(c), 1});
  LeximinResult r = leximin(p);
  out.profit = r.shares;
  // Copies are interchangeable, so their average is also optimal.
  out.copy_dual.resize(out.reduction.origin.size());
  for (std::size_t c = 0; c < out.copy_dual.size(); ++c) {
    int a = out.reduction.origin[c];
    out.copy_dual[c] = r.shares[a] / instance.b[a];
  }
  return out;
}

}  // namespace owen
