#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "owen/bmatching_game.hpp"
#include "owen/errors.hpp"

using namespace owen;

namespace {

BMatchingInstance make(int l, int r, std::vector<int> b,
                       std::initializer_list<std::tuple<int, int, int>> es) {
  BMatchingInstance inst{l, r, std::move(b), {}};
  for (auto& [i, j, w] : es) inst.edges.push_back({i, j, w});
  return inst;
}

// u = U[0], v1 = V[0], v2 = V[1]
BMatchingInstance example() { return make(1, 2, {2, 2, 1}, {{0, 0, 1}, {0, 1, 3}}); }

std::vector<Rational> R(std::initializer_list<Rational> v) { return v; }

Rational total(const std::vector<Rational>& v) {
  Rational s = 0;
  for (auto& x : v) s += x;
  return s;
}

BMatchingInstance random_bmatching(std::mt19937_64& rng, int max_b_sum) {
  std::uniform_int_distribution<int> side(1, 3), b(1, 3), w(1, 5), coin(0, 2);
  for (;;) {
    BMatchingInstance inst;
    inst.left_count = side(rng);
    inst.right_count = side(rng);
    int sum = 0;
    for (int i = 0; i < inst.agent_count(); ++i) {
      inst.b.push_back(b(rng));
      sum += inst.b.back();
    }
    for (int i = 0; i < inst.left_count; ++i)
      for (int j = 0; j < inst.right_count; ++j)
        if (coin(rng)) inst.edges.push_back({i, j, w(rng)});
    if (sum <= max_b_sum) return inst;
  }
}

// Dual LP written out independently of the library's builder.
LeximinProblem explicit_dual(const BMatchingInstance& inst) {
  LeximinProblem p;
  for (int a = 0; a < inst.agent_count(); ++a) p.base.add_variable();
  std::vector<Term> obj;
  for (int a = 0; a < inst.agent_count(); ++a) obj.push_back({a, inst.b[a]});
  p.base.set_objective(Sense::Minimize, obj);
  for (auto& e : inst.edges)
    p.base.add_constraint({{inst.left_agent(e.left), 1}, {inst.right_agent(e.right), 1}},
                          Relation::GreaterEqual, e.weight);
  for (int a = 0; a < inst.agent_count(); ++a) p.shares.push_back({{a, inst.b[a]}});
  return p;
}

}  // namespace

TEST_CASE("max weight b-matching examples") {
  auto s = max_weight_bmatching(example());
  CHECK(s.value == 4);
  CHECK(s.multiplicity == std::vector<long>{1, 1});
  CHECK(s.dual.value == R({1, 0, 2}));

  auto one = make(1, 1, {1, 1}, {{0, 0, 7}});
  auto s1 = max_weight_bmatching(one);
  CHECK(s1.value == 7);
  CHECK(s1.multiplicity == std::vector<long>{1});

  auto none = make(2, 1, {1, 1, 1}, {});
  CHECK(max_weight_bmatching(none).value == 0);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(make(1, 1, {1}, {})), ValidationError);
  CHECK_THROWS_AS(validate(make(1, 1, {0, 1}, {})), ValidationError);
  CHECK_THROWS_AS(validate(make(1, 1, {1, 1}, {{0, 1, 1}})), ValidationError);
  CHECK_THROWS_AS(validate(make(1, 1, {1, 1}, {{0, 0, 0}})), ValidationError);
}

TEST_CASE("owen imputation from a dual") {
  CHECK(owen_from_dual(example(), {R({1, 0, 2})}) == R({2, 0, 2}));
  auto one = make(1, 1, {1, 1}, {{0, 0, 7}});
  CHECK(owen_from_dual(one, {R({7, 0})}) == R({7, 0}));
  CHECK(owen_from_dual(one, {R({0, 7})}) == R({0, 7}));
  CHECK_THROWS_AS(owen_from_dual(one, {R({7, 7})}), NotOptimalDual);
  CHECK_THROWS_AS(owen_from_dual(one, {R({3, 3})}), NotOptimalDual);
  CHECK(!is_feasible_bmatch_dual(one, {R({3, 3})}));
  CHECK(!is_feasible_bmatch_dual(one, {R({8, -1})}));
}

TEST_CASE("leximin, leximax and membership examples") {
  CHECK(leximin_owen(example()) == R({2, 0, 2}));
  CHECK(leximax_owen(example()) == R({2, 0, 2}));
  auto one = make(1, 1, {1, 1}, {{0, 0, 7}});
  CHECK(leximin_owen(one) == R({Rational(7, 2), Rational(7, 2)}));
  auto two = make(1, 1, {1, 1}, {{0, 0, 2}});
  CHECK(leximin_owen(two) == R({1, 1}));

  auto no = check_owen_membership(example(), R({4, 0, 0}));
  CHECK(!no.member);
  CHECK(!no.reason.empty());
  auto yes = check_owen_membership(example(), R({2, 0, 2}));
  REQUIRE(yes.member);
  CHECK(yes.certificate->value == R({1, 0, 2}));
  CHECK_THROWS_AS(check_owen_membership(example(), R({1, 0, 2})), NotAnImputation);
  CHECK(!check_owen_membership(example(), R({5, -1, 0})).member);
}

TEST_CASE("duplication reduction") {
  auto d = duplicate_reduction(example());
  CHECK(d.expanded.agent_count() == 5);
  CHECK(d.expanded.edges.size() == 6);
  CHECK(d.origin == std::vector<int>{0, 0, 1, 1, 2});
  for (int b : d.expanded.b) CHECK(b == 1);

  auto one = make(2, 1, {1, 1, 1}, {{0, 0, 2}, {1, 0, 3}});
  auto same = duplicate_reduction(one);
  CHECK(same.expanded.agent_count() == 3);
  CHECK(same.expanded.edges.size() == 2);
  CHECK(same.expanded.edges[1].weight == 3);

  auto big = make(1, 1, {40, 40}, {{0, 0, 1}});
  CHECK_THROWS_AS(duplicate_reduction(big), BoundExceeded);
  CHECK_NOTHROW(duplicate_reduction(big, 80));

  auto dl = leximin_via_duplication(example());
  CHECK(dl.profit == R({2, 0, 2}));
}

TEST_CASE("a vertex with two copies against two unit vertices") {
  // the direct leximin; a leximin over individual copies would give (1, 1/2, 1/2)
  auto inst = make(1, 2, {2, 1, 1}, {{0, 0, 1}, {0, 1, 1}});
  Rational t(2, 3);
  CHECK(leximin_owen(inst) == R({t, t, t}));
  auto dl = leximin_via_duplication(inst);
  CHECK(dl.profit == R({t, t, t}));
  CHECK(dl.copy_dual[0] == dl.copy_dual[1]);
}

TEST_CASE("random instances") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 60; ++it) {
    auto inst = random_bmatching(rng, 12);
    auto s = max_weight_bmatching(inst);
    CHECK(s.value == oracle::bmatching_by_enumeration(inst));
    Rational used = 0;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      used += inst.edges[e].weight * s.multiplicity[e];
    CHECK(used == s.value);
    CHECK(is_feasible_bmatch_dual(inst, s.dual));
    CHECK(total(owen_from_dual(inst, s.dual)) == s.value);

    auto p = explicit_dual(inst);
    auto lm = leximin_owen(inst);
    auto lx = leximax_owen(inst);
    CHECK(lm == oracle::leximin_by_saturation(p, Direction::Leximin));
    CHECK(lx == oracle::leximin_by_saturation(p, Direction::Leximax));
    CHECK(check_owen_membership(inst, lm).member);
    CHECK(check_owen_membership(inst, lx).member);

    auto dl = leximin_via_duplication(inst);
    CHECK(dl.profit == lm);
    for (std::size_t c = 0; c < dl.copy_dual.size(); ++c) {
      int a = dl.reduction.origin[c];
      CHECK(dl.copy_dual[c] * inst.b[a] == lm[a]);
    }

    // unique dual: leximin and leximax coincide
    auto sampler = optimal_face_sampler(p);
    bool unique = true;
    for (int a = 0; a < inst.agent_count() && unique; ++a) {
      std::vector<Rational> w(inst.agent_count(), 0);
      w[a] = 1;
      auto hi = sampler(w);
      w[a] = -1;
      auto lo = sampler(w);
      unique = hi[a] == lo[a];
    }
    if (unique) CHECK(lm == lx);
  }
}

TEST_CASE("balanced components") {
  // On a component of tight edges that can shift both ways, U gains what V
  // loses only if the b sums agree, so every two-way shift keeps the value.
  std::mt19937_64 rng(83);
  int flexible = 0;
  for (int it = 0; it < 80; ++it) {
    auto inst = random_bmatching(rng, 12);
    auto lm = leximin_owen(inst);
    auto lx = leximax_owen(inst);
    auto s = max_weight_bmatching(inst);
    int n = inst.agent_count();
    std::vector<Rational> x(n);
    for (int a = 0; a < n; ++a) {
      x[a] = (lm[a] + lx[a]) / inst.b[a] + s.dual.value[a];
      x[a] /= 3;
    }
    REQUIRE(is_feasible_bmatch_dual(inst, {x}));
    Rational eps = 1;
    for (auto& e : inst.edges) {
      Rational slack = x[inst.left_agent(e.left)] + x[inst.right_agent(e.right)] - e.weight;
      if (slack > 0 && slack / 4 < eps) eps = slack / 4;
    }
    for (auto& v : x)
      if (v > 0 && v / 4 < eps) eps = v / 4;
    std::vector<int> comp(n, -1);
    for (int start = 0; start < n; ++start) {
      if (comp[start] >= 0) continue;
      std::vector<int> todo{start};
      comp[start] = start;
      while (!todo.empty()) {
        int a = todo.back();
        todo.pop_back();
        for (auto& e : inst.edges) {
          int l = inst.left_agent(e.left), r = inst.right_agent(e.right);
          if (x[l] + x[r] != e.weight) continue;
          int o = a == l ? r : a == r ? l : -1;
          if (o >= 0 && comp[o] < 0) {
            comp[o] = start;
            todo.push_back(o);
          }
        }
      }
      int bu = 0, bv = 0;
      std::vector<Rational> up = x, down = x;
      for (int a = 0; a < n; ++a) {
        if (comp[a] != start) continue;
        Rational d = a < inst.left_count ? eps : -eps;
        up[a] += d;
        down[a] -= d;
        (a < inst.left_count ? bu : bv) += inst.b[a];
      }
      if (is_feasible_bmatch_dual(inst, {up}) && is_feasible_bmatch_dual(inst, {down})) {
        ++flexible;
        CHECK(bu == bv);
      }
    }
  }
  CHECK(flexible > 0);
}
