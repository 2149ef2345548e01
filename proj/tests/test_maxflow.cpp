#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "owen/errors.hpp"
#include "owen/maxflow_game.hpp"

using namespace owen;

namespace {

MaxFlowInstance make(int n, int s, int t,
                     std::initializer_list<std::tuple<int, int, int>> es) {
  MaxFlowInstance inst{DiGraph(n), {}, s, t};
  for (auto& [a, b, c] : es) {
    inst.graph.add_edge(a, b);
    inst.capacity.push_back(c);
  }
  return inst;
}

MaxFlowInstance unit_path(int n) {
  MaxFlowInstance inst{DiGraph(n + 1), {}, 0, n};
  for (int i = 0; i < n; ++i) {
    inst.graph.add_edge(i, i + 1);
    inst.capacity.push_back(1);
  }
  return inst;
}

// s=0 v1=1 v2=2 v3=3 t=4; edges 1 and 2 are (v1,v2),(v1,v3)
MaxFlowInstance fig_flow() {
  return make(5, 0, 4, {{0, 1, 10}, {1, 2, 1}, {1, 3, 1}, {2, 4, 10},
                        {3, 4, 10}, {2, 3, 10}, {3, 2, 10}});
}

MaxFlowInstance random_flow(std::mt19937_64& rng, int max_n, int max_m,
                            int max_cap) {
  std::uniform_int_distribution<int> nd(2, max_n);
  int n = nd(rng);
  std::uniform_int_distribution<int> v(0, n - 1), c(1, max_cap), md(1, max_m);
  MaxFlowInstance inst{DiGraph(n), {}, 0, n - 1};
  int m = md(rng);
  for (int i = 0; i < m; ++i) {
    int a = v(rng), b = v(rng);
    if (a == b) continue;
    inst.graph.add_edge(a, b);
    inst.capacity.push_back(c(rng));
  }
  return inst;
}

// Existence of a feasible flow dual with the given profits, by LP.
bool owen_by_lp(const MaxFlowInstance& inst, const Imputation& p) {
  LeximinProblem prob = flow_dual_problem(inst);
  LinearProgram lp = prob.base;
  Rational value = max_flow(inst.graph, inst.capacity, inst.source, inst.sink).value;
  lp.add_constraint(lp.objective(), Relation::Equal, value);
  for (int e = 0; e < inst.graph.edge_count(); ++e)
    lp.add_constraint(prob.shares[e], Relation::Equal, p[e]);
  lp.set_objective(Sense::Minimize, {});
  return solve(lp).status == LpStatus::Optimal;
}

std::vector<Rational> R(std::initializer_list<Rational> v) { return v; }

void check_claims(const MaxFlowInstance& inst, const MaxFlowLeximin& r) {
  CHECK(is_feasible_flow_dual(inst, r.dual));
  Rational value = max_flow(inst.graph, inst.capacity, inst.source, inst.sink).value;
  Rational total = 0;
  for (int e = 0; e < inst.graph.edge_count(); ++e)
    total += inst.capacity[e] * r.dual.length[e];
  CHECK(total == value);
  CHECK(owen_from_dual(inst, r.dual) == r.profit);
  auto pq = build_pq_structure(inst);
  for (const Edge& e : pq.dag.dag.edges()) {
    int a = pq.dag.members[e.tail][0], b = pq.dag.members[e.head][0];
    CHECK(r.dual.potential[a] <= r.dual.potential[b]);
  }
  auto cls = classify_edges(inst.graph, inst.capacity, inst.source, inst.sink);
  for (int e = 0; e < inst.graph.edge_count(); ++e)
    if (cls[e] == EdgeClass::Inessential) CHECK(r.profit[e] == 0);
  for (std::size_t i = 1; i < r.alphas.size(); ++i)
    CHECK(r.alphas[i] >= r.alphas[i - 1]);
}

}  // namespace

TEST_CASE("owen_from_dual") {
  auto p = unit_path(3);
  Rational third(1, 3);
  FlowDual d{{1, Rational(2, 3), third, 0}, {third, third, third}};
  CHECK(owen_from_dual(p, d) == R({third, third, third}));

  auto par = make(2, 0, 1, {{0, 1, 1}, {0, 1, 2}});
  CHECK(owen_from_dual(par, FlowDual{{1, 0}, {1, 1}}) == R({1, 2}));

  auto cut = make(3, 0, 2, {{0, 1, 1}});
  CHECK(owen_from_dual(cut, FlowDual{{1, 1, 0}, {0}}) == R({0}));

  // feasible but not optimal
  CHECK_THROWS_AS(owen_from_dual(par, FlowDual{{2, 0}, {2, 2}}), NotOptimalDual);
}

TEST_CASE("build_pq_structure") {
  auto p = unit_path(2);
  auto pq = build_pq_structure(p);
  CHECK(pq.dag.members.size() == 3);
  REQUIRE(pq.dag.dag.edge_count() == 2);
  CHECK(pq.full[0]);
  CHECK(pq.full[1]);
  CHECK(pq.source_component != pq.sink_component);

  auto f = fig_flow();
  auto fq = build_pq_structure(f);
  std::vector<EdgeId> full;
  for (int e = 0; e < fq.dag.dag.edge_count(); ++e)
    if (fq.full[e]) full.push_back(fq.original[e]);
  std::sort(full.begin(), full.end());
  CHECK(full == std::vector<EdgeId>{1, 2});
}

TEST_CASE("leximin_owen examples") {
  Rational third(1, 3);
  auto r = leximin_owen(unit_path(3));
  CHECK(r.profit == R({third, third, third}));
  check_claims(unit_path(3), r);

  auto series = make(3, 0, 2, {{0, 1, 1}, {1, 2, 2}});
  CHECK(leximin_owen(series).profit == R({1, 0}));

  auto par = make(2, 0, 1, {{0, 1, 1}, {0, 1, 2}});
  CHECK(leximin_owen(par).profit == R({1, 2}));

  auto zero = make(3, 0, 2, {{0, 1, 4}, {2, 1, 1}});
  auto z = leximin_owen(zero);
  CHECK(z.profit == R({0, 0}));
  CHECK(is_feasible_flow_dual(zero, z.dual));
  CHECK(leximin_owen_lp(zero) == R({0, 0}));

  CHECK(leximin_owen(fig_flow()).profit == R({0, 1, 1, 0, 0, 0, 0}));
}

TEST_CASE("dead-end branches keep the dual optimal") {
  // s->a->t with a dead-end edge a->y
  auto inst = make(4, 0, 2, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}});
  auto r = leximin_owen(inst);
  check_claims(inst, r);
  CHECK(r.profit == R({Rational(1, 2), Rational(1, 2), 0}));
}

TEST_CASE("leximax_owen examples") {
  Rational third(1, 3);
  CHECK(leximax_owen(unit_path(3)) == R({third, third, third}));
  auto par = make(2, 0, 1, {{0, 1, 1}, {0, 1, 2}});
  CHECK(leximax_owen(par) == R({1, 2}));
  CHECK(leximin_owen_lp(par) == R({1, 2}));
  CHECK(leximax_owen(fig_flow()) == R({0, 1, 1, 0, 0, 0, 0}));
}

TEST_CASE("check_owen_membership examples") {
  auto f = fig_flow();
  auto no = check_owen_membership(f, R({2, 0, 0, 0, 0, 0, 0}));
  CHECK(!no.member);
  CHECK(no.reason == "inessential edge paid");
  auto yes = check_owen_membership(f, R({0, 1, 1, 0, 0, 0, 0}));
  REQUIRE(yes.member);
  CHECK(is_feasible_flow_dual(f, *yes.certificate));
  CHECK(owen_from_dual(f, *yes.certificate) == R({0, 1, 1, 0, 0, 0, 0}));
  CHECK_THROWS_AS(check_owen_membership(f, R({1, 0, 0, 0, 0, 0, 0})),
                  NotAnImputation);
}

TEST_CASE("random instances: both leximin paths, oracle, claims, membership") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 60; ++it) {
    auto inst = random_flow(rng, 8, 12, 5);
    auto comb = leximin_owen(inst);
    check_claims(inst, comb);
    CHECK(leximin_owen_lp(inst) == comb.profit);
    auto prob = flow_dual_problem(inst);
    CHECK(oracle::leximin_by_saturation(prob, Direction::Leximin) == comb.profit);
    auto lmax = leximax_owen(inst);
    CHECK(oracle::leximin_by_saturation(prob, Direction::Leximax) == lmax);
    auto any = owen_from_dual(inst, any_optimal_dual(inst));
    for (const auto& p : {comb.profit, lmax, any}) {
      auto m = check_owen_membership(inst, p);
      CHECK(m.member);
      if (m.member) CHECK(owen_from_dual(inst, *m.certificate) == p);
    }
    CHECK(std::holds_alternative<VerifyOk>(
        verify_leximin(prob, comb.profit, 100, it)));
  }
}

TEST_CASE("membership agrees with the LP feasibility oracle") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> coin(0, 3);
  int yes = 0, no = 0;
  for (int it = 0; it < 120; ++it) {
    auto inst = random_flow(rng, 6, 9, 4);
    int m = inst.graph.edge_count();
    if (m < 2) continue;
    auto a = owen_from_dual(inst, any_optimal_dual(inst));
    auto b = leximax_owen(inst);
    Imputation p(m);
    // mixtures of Owen points are Owen points; shifted ones usually are not
    Rational t(coin(rng), 3);
    t.canonicalize();
    for (int e = 0; e < m; ++e) p[e] = t * a[e] + (1 - t) * b[e];
    if (coin(rng) == 0) {
      std::uniform_int_distribution<int> pick(0, m - 1);
      int from = pick(rng), to = pick(rng);
      Rational d(1, 2);
      p[from] -= d;
      p[to] += d;
    }
    auto verdict = check_owen_membership(inst, p);
    bool want = owen_by_lp(inst, p);
    CHECK(verdict.member == want);
    (want ? yes : no)++;
  }
  CHECK(yes > 20);
  CHECK(no > 5);
}
