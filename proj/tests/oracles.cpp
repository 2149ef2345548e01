#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace oracle {

using namespace owen;

Rational min_cut_by_enumeration(const DiGraph& g, const CapacityMap& cap,
                                int s, int t) {
  int n = g.vertex_count();
  std::optional<Rational> best;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> s & 1) || (mask >> t & 1)) continue;
    Rational c = 0;
    for (const Edge& e : g.edges())
      if ((mask >> e.tail & 1) && !(mask >> e.head & 1)) c += cap[e.id];
    if (!best || c < *best) best = c;
  }
  return *best;
}

std::vector<std::optional<Rational>> longest_by_enumeration(
    const DiGraph& g, const std::vector<Rational>& length, int source) {
  std::vector<std::optional<Rational>> best(g.vertex_count());
  std::function<void(int, Rational)> walk = [&](int v, Rational d) {
    if (!best[v] || d > *best[v]) best[v] = d;
    for (EdgeId e : g.out_edges(v)) walk(g.edge(e).head, d + length[e]);
  };
  walk(source, 0);
  return best;
}

namespace {

std::optional<std::vector<Rational>> solve_square(
    std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (int k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

std::optional<Rational> lp_value_by_vertices(const LinearProgram& lp) {
  int n = lp.variable_count();
  int m = lp.constraint_count();
  // rows 0..m-1 are constraints, m..m+n-1 are x_j >= 0
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const Constraint& c : lp.constraints()) {
    std::vector<Rational> r(n);
    for (const Term& t : c.terms) r[t.var] += t.coef;
    rows.push_back(r);
    rhs.push_back(c.rhs);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> r(n);
    r[j] = 1;
    rows.push_back(r);
    rhs.push_back(0);
  }
  std::vector<int> forced, optional_rows;
  for (int i = 0; i < m + n; ++i) {
    if (i < m && lp.constraint(i).relation == Relation::Equal)
      forced.push_back(i);
    else
      optional_rows.push_back(i);
  }
  std::optional<Rational> best;
  int need = n - static_cast<int>(forced.size());
  if (need < 0) need = 0;
  std::vector<int> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (static_cast<int>(pick.size()) == need) {
      std::vector<int> active = forced;
      active.insert(active.end(), pick.begin(), pick.end());
      // use the first n independent rows only when counts match
      if (static_cast<int>(active.size()) != n) return;
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (int i : active) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
      auto x = solve_square(a, b);
      if (!x) return;
      if (!std::holds_alternative<FeasibilityOk>(check_feasibility(lp, *x)))
        return;
      Rational v = evaluate(lp.objective(), *x);
      if (!best || (lp.sense() == Sense::Maximize ? v > *best : v < *best))
        best = v;
      return;
    }
    for (std::size_t i = from; i < optional_rows.size(); ++i) {
      pick.push_back(optional_rows[i]);
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return best;
}

std::vector<Rational> leximin_by_saturation(const LeximinProblem& p,
                                            Direction direction) {
  LpSolution base = solve(p.base);
  if (base.status != LpStatus::Optimal)
    throw std::runtime_error("oracle: base not optimal");
  Rational opt = base.objective;
  std::size_t k = p.shares.size();
  std::vector<std::optional<Rational>> fixed(k);
  bool lexmin = direction == Direction::Leximin;
  Relation bound = lexmin ? Relation::GreaterEqual : Relation::LessEqual;

  auto face = [&]() {
    LinearProgram lp = p.base;
    if (!p.base.objective().empty())
      lp.add_constraint(p.base.objective(), Relation::Equal, opt);
    for (std::size_t i = 0; i < k; ++i)
      if (fixed[i]) lp.add_constraint(p.shares[i], Relation::Equal, *fixed[i]);
    return lp;
  };

  while (std::any_of(fixed.begin(), fixed.end(),
                     [](const auto& f) { return !f; })) {
    LinearProgram lp = face();
    int alpha = lp.add_variable("alpha", true);
    for (std::size_t i = 0; i < k; ++i) {
      if (fixed[i]) continue;
      auto terms = p.shares[i];
      terms.push_back({alpha, -1});
      lp.add_constraint(terms, bound, 0);
    }
    lp.set_objective(lexmin ? Sense::Maximize : Sense::Minimize,
                     {{alpha, 1}});
    LpSolution level = solve(lp);
    Rational a = level.objective;
    bool any = false;
    std::vector<std::size_t> to_fix;
    for (std::size_t i = 0; i < k; ++i) {
      if (fixed[i]) continue;
      LinearProgram probe = face();
      for (std::size_t j = 0; j < k; ++j)
        if (!fixed[j]) probe.add_constraint(p.shares[j], bound, a);
      probe.set_objective(lexmin ? Sense::Maximize : Sense::Minimize,
                          p.shares[i]);
      LpSolution s = solve(probe);
      if (s.status == LpStatus::Optimal && s.objective == a) {
        to_fix.push_back(i);
        any = true;
      }
    }
    if (!any) throw std::runtime_error("oracle: nothing saturated");
    for (std::size_t i : to_fix) fixed[i] = a;
  }
  std::vector<Rational> out;
  for (auto& f : fixed) out.push_back(*f);
  return out;
}

std::optional<Rational> branching_by_enumeration(
    const BranchingInstance& inst) {
  const DiGraph& g = inst.graph;
  int n = g.vertex_count();
  std::vector<int> choice(n, -1);
  std::optional<Rational> best;
  std::vector<int> order;
  for (int v = 0; v < n; ++v)
    if (v != inst.root) {
      if (g.out_edges(v).empty()) return std::nullopt;
      order.push_back(v);
    }
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == order.size()) {
      for (int v : order) {
        int cur = v;
        for (int steps = 0; cur != inst.root && steps <= n; ++steps)
          cur = g.edge(choice[cur]).head;
        if (cur != inst.root) return;
      }
      Rational c = 0;
      for (int v : order) c += inst.cost[choice[v]];
      if (!best || c < *best) best = c;
      return;
    }
    for (EdgeId e : g.out_edges(order[i])) {
      if (g.edge(e).head == order[i]) continue;
      choice[order[i]] = e;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

Rational mst_kruskal(int n,
                     const std::vector<std::tuple<int, int, Rational>>& e) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  auto sorted = e;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::get<2>(a) < std::get<2>(b);
  });
  Rational total = 0;
  for (auto& [a, b, w] : sorted) {
    int ra = find(a), rb = find(b);
    if (ra == rb) continue;
    parent[ra] = rb;
    total += w;
  }
  return total;
}

Rational bmatching_by_enumeration(const BMatchingInstance& inst) {
  std::vector<int> room = inst.b;
  Rational best = 0;
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i,
                                                       Rational acc) {
    if (i == inst.edges.size()) {
      if (acc > best) best = acc;
      return;
    }
    const BEdge& e = inst.edges[i];
    int l = inst.left_agent(e.left), r = inst.right_agent(e.right);
    int most = std::min(room[l], room[r]);
    for (int k = 0; k <= most; ++k) {
      room[l] -= k;
      room[r] -= k;
      rec(i + 1, acc + e.weight * k);
      room[l] += k;
      room[r] += k;
    }
  };
  rec(0, 0);
  return best;
}

LinearProgram enumerated_first_round_lp(const BranchingInstance& inst) {
  const DiGraph& g = inst.graph;
  std::vector<int> ag;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (v != inst.root) ag.push_back(v);
  Rational opt = *branching_by_enumeration(inst);

  LinearProgram lp;
  std::vector<int> ze, zv;
  for (int e = 0; e < g.edge_count(); ++e) ze.push_back(lp.add_variable());
  for (std::size_t i = 0; i < ag.size(); ++i) zv.push_back(lp.add_variable());
  int beta = lp.add_variable("beta", true);
  std::vector<Term> obj;
  for (int e = 0; e < g.edge_count(); ++e) obj.push_back({ze[e], inst.cost[e]});
  obj.push_back({beta, -opt});
  lp.set_objective(Sense::Minimize, obj);
  std::vector<Term> total;
  for (int z : zv) total.push_back({z, 1});
  lp.add_constraint(total, Relation::Equal, 1);

  int k = static_cast<int>(ag.size());
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<char> in(g.vertex_count(), 0);
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) in[ag[i]] = 1;
    std::vector<Term> boundary;
    for (const Edge& e : g.edges())
      if (in[e.tail] && !in[e.head]) boundary.push_back({ze[e.id], 1});
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      auto row = boundary;
      row.push_back({zv[i], -1});
      row.push_back({beta, -1});
      lp.add_constraint(row, Relation::GreaterEqual, 0);
    }
  }
  return lp;
}

}  // namespace oracle
