#include "owen/branching_game.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

#include "owen/errors.hpp"

namespace owen {

void validate(const BranchingInstance& instance) {
  const DiGraph& g = instance.graph;
  if (!g.has_vertex(instance.root)) throw ValidationError("root is not a vertex");
  if (static_cast<int>(instance.cost.size()) != g.edge_count())
    throw ValidationError("cost count does not match edge count");
  for (const Rational& c : instance.cost)
    if (c < 0) throw ValidationError("negative edge cost");
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<int> todo{instance.root};
  seen[instance.root] = 1;
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (EdgeId e : g.in_edges(v))
      if (!seen[g.edge(e).tail]) {
        seen[g.edge(e).tail] = 1;
        todo.push_back(g.edge(e).tail);
      }
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!seen[v])
      throw ValidationError("vertex " + std::to_string(v) +
                            " has no path to the root");
}

std::vector<VertexId> agents(const BranchingInstance& instance) {
  std::vector<VertexId> out;
  for (int v = 0; v < instance.graph.vertex_count(); ++v)
    if (v != instance.root) out.push_back(v);
  return out;
}

namespace {

struct WEdge {
  int tail, head;
  Rational w;
  int id;  // position in the caller's list
};

// Chu-Liu/Edmonds for in-arborescences. Returns positions of the chosen
// edges; appends the laminar dual to `dual`. Throws Disconnected.
std::vector<int> edmonds(int n, int root, const std::vector<WEdge>& edges,
                         const std::vector<std::vector<int>>& members,
                         std::vector<BranchingCut>& dual) {
  std::vector<int> best(n, -1);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const WEdge& e = edges[i];
    if (e.tail == root || e.tail == e.head) continue;
    if (best[e.tail] < 0 || e.w < edges[best[e.tail]].w) best[e.tail] = i;
  }
  for (int v = 0; v < n; ++v) {
    if (v == root) continue;
    if (best[v] < 0) throw Disconnected("a vertex cannot reach the root");
    if (edges[best[v]].w > 0) {
      auto set = members[v];
      std::sort(set.begin(), set.end());
      dual.push_back({std::move(set), edges[best[v]].w});
    }
  }
  // find cycles of chosen edges
  std::vector<int> cycle_of(n, -1), state(n, 0);
  int cycles = 0;
  for (int v = 0; v < n; ++v) {
    int cur = v;
    std::vector<int> trail;
    while (cur != root && state[cur] == 0) {
      state[cur] = 1;
      trail.push_back(cur);
      cur = edges[best[cur]].head;
    }
    if (cur != root && state[cur] == 1) {
      for (int x = cur;;) {
        cycle_of[x] = cycles;
        x = edges[best[x]].head;
        if (x == cur) break;
      }
      ++cycles;
    }
    for (int x : trail) state[x] = 2;
  }
  if (cycles == 0) {
    std::vector<int> chosen;
    for (int v = 0; v < n; ++v)
      if (v != root) chosen.push_back(best[v]);
    return chosen;
  }
  // contract: cycles become nodes 0..cycles-1, the rest follow
  std::vector<int> node(n);
  int next = cycles;
  for (int v = 0; v < n; ++v) node[v] = cycle_of[v] >= 0 ? cycle_of[v] : next++;
  std::vector<std::vector<int>> inner(next);
  for (int v = 0; v < n; ++v)
    inner[node[v]].insert(inner[node[v]].end(), members[v].begin(),
                          members[v].end());
  std::vector<WEdge> reduced;
  std::vector<int> origin;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const WEdge& e = edges[i];
    int a = node[e.tail], b = node[e.head];
    if (a == b) continue;
    Rational w = e.w;
    if (e.tail != root) w -= edges[best[e.tail]].w;
    reduced.push_back({a, b, w, static_cast<int>(reduced.size())});
    origin.push_back(i);
  }
  std::vector<int> sub =
      edmonds(next, node[root], reduced, inner, dual);
  std::vector<int> chosen;
  std::vector<int> exit_of(cycles, -1);
  for (int r : sub) {
    int i = origin[r];
    chosen.push_back(i);
    if (cycle_of[edges[i].tail] >= 0) exit_of[cycle_of[edges[i].tail]] = edges[i].tail;
  }
  for (int v = 0; v < n; ++v)
    if (cycle_of[v] >= 0 && exit_of[cycle_of[v]] != v) chosen.push_back(best[v]);
  return chosen;
}

}  // namespace

BranchingSolution min_cost_branching(const BranchingInstance& instance) {
  const DiGraph& g = instance.graph;
  std::vector<WEdge> edges;
  for (const Edge& e : g.edges())
    edges.push_back({e.tail, e.head, instance.cost[e.id], e.id});
  std::vector<std::vector<int>> members(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) members[v] = {v};
  BranchingSolution sol;
  std::vector<int> chosen =
      edmonds(g.vertex_count(), instance.root, edges, members, sol.dual);
  sol.branching.cost = 0;
  for (int i : chosen) {
    sol.branching.edges.push_back(edges[i].id);
    sol.branching.cost += edges[i].w;
  }
  std::sort(sol.branching.edges.begin(), sol.branching.edges.end());
  return sol;
}

std::optional<Rational> min_branching_cost(const BranchingInstance& instance,
                                           const std::vector<char>& keep) {
  const DiGraph& g = instance.graph;
  std::vector<int> index(g.vertex_count(), -1);
  int n = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (keep[v] || v == instance.root) index[v] = n++;
  std::vector<WEdge> edges;
  for (const Edge& e : g.edges())
    if (index[e.tail] >= 0 && index[e.head] >= 0)
      edges.push_back({index[e.tail], index[e.head], instance.cost[e.id], e.id});
  std::vector<std::vector<int>> members(n);
  for (int v = 0; v < n; ++v) members[v] = {v};
  std::vector<BranchingCut> dual;
  try {
    std::vector<int> chosen = edmonds(n, index[instance.root], edges, members, dual);
    Rational c = 0;
    for (int i : chosen) c += edges[i].w;
    return c;
  } catch (const Disconnected&) {
    return std::nullopt;
  }
}

namespace {

// Dual LPs over cut rows sum_{e in out(S)} z(e) + a z(v) + b beta >= k_v,
// one row per generated (S, v).
struct CutModel {
  const BranchingInstance* inst = nullptr;
  std::vector<VertexId> agent_list;
  std::vector<int> agent_index;  // vertex -> agent position or -1
  LinearProgram lp;
  std::vector<int> ze;
  std::vector<int> zv;  // empty when the model has no vertex variables
  int beta = -1;
  Rational zv_coef;    // a
  Rational beta_coef;  // b
  std::vector<Rational> constant;  // k_v per agent
  std::vector<SetCut> rows;        // generated cut per cut row, in order
  int first_cut_row = 0;
  std::set<std::pair<std::vector<VertexId>, VertexId>> known;

  explicit CutModel(const BranchingInstance& instance)
      : inst(&instance), agent_list(agents(instance)),
        agent_index(instance.graph.vertex_count(), -1) {
    for (std::size_t i = 0; i < agent_list.size(); ++i)
      agent_index[agent_list[i]] = static_cast<int>(i);
    for (int e = 0; e < instance.graph.edge_count(); ++e)
      ze.push_back(lp.add_variable("z_e" + std::to_string(e)));
    constant.assign(agent_list.size(), 0);
  }

  Constraint row(const SetCut& cut) const {
    std::vector<char> in(inst->graph.vertex_count(), 0);
    for (int v : cut.set) in[v] = 1;
    Constraint c;
    for (const Edge& e : inst->graph.edges())
      if (in[e.tail] && !in[e.head]) c.terms.push_back({ze[e.id], 1});
    int a = agent_index[cut.vertex];
    if (!zv.empty() && zv_coef != 0) c.terms.push_back({zv[a], zv_coef});
    if (beta >= 0) c.terms.push_back({beta, beta_coef});
    c.relation = Relation::GreaterEqual;
    c.rhs = constant[a];
    return c;
  }

  bool add(const SetCut& cut) {
    if (!known.insert({cut.set, cut.vertex}).second) return false;
    lp.add_constraint(row(cut));
    rows.push_back(cut);
    return true;
  }

  // Right-hand side the max-flow from v to r must reach.
  Rational threshold(int a, std::span<const Rational> point, bool ray) const {
    Rational t = ray ? Rational(0) : constant[a];
    if (!zv.empty()) t -= zv_coef * point[zv[a]];
    if (beta >= 0) t -= beta_coef * point[beta];
    return t;
  }

  std::vector<SetCut> violated(std::span<const Rational> point,
                               bool ray) const {
    const DiGraph& g = inst->graph;
    CapacityMap cap(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) cap[e] = point[ze[e]];
    std::vector<SetCut> out;
    for (std::size_t a = 0; a < agent_list.size(); ++a) {
      Rational need = threshold(static_cast<int>(a), point, ray);
      if (need <= 0) continue;
      VertexId v = agent_list[a];
      FlowResult f = max_flow(g, cap, v, inst->root);
      if (f.value < need)
        out.push_back({min_vertex_cut_side(g, cap, f, v), v});
    }
    return out;
  }

  LpSolution solve_with_cuts() {
    SeparationOracle oracle = [this](std::span<const Rational> point,
                                     bool ray) {
      std::vector<Constraint> out;
      for (SetCut& c : violated(point, ray)) {
        if (!known.insert({c.set, c.vertex}).second)
          throw std::logic_error("separation repeated a known cut");
        out.push_back(row(c));
        rows.push_back(std::move(c));
      }
      return out;
    };
    int limit = 10 * static_cast<int>(agent_list.size() +
                                      inst->graph.edge_count()) + 100;
    return solve_with_separation(lp, oracle, limit);
  }
};

struct SharedPool {
  std::vector<SetCut> cuts;
  std::set<std::pair<std::vector<VertexId>, VertexId>> seen;
  void add(const SetCut& c) {
    if (seen.insert({c.set, c.vertex}).second) cuts.push_back(c);
  }
};

SharedPool seed_pool(const BranchingInstance& instance) {
  SharedPool pool;
  for (const BranchingCut& cut : min_cost_branching(instance).dual)
    for (VertexId v : cut.set) pool.add({cut.set, v});
  return pool;
}

Rational branching_value(const BranchingInstance& instance) {
  return min_cost_branching(instance).branching.cost;
}

// One leximin or leximax round of the dual series.
RoundOutcome series_round(const BranchingInstance& instance, const Rational& opt,
                          const FixedSet& fixed, Direction direction,
                          SharedPool& pool) {
  bool lexmin = direction == Direction::Leximin;
  CutModel m(instance);
  std::size_t k = m.agent_list.size();
  for (std::size_t a = 0; a < k; ++a)
    m.zv.push_back(m.lp.add_variable("z_v" + std::to_string(a), fixed.is_fixed(a)));
  m.beta = m.lp.add_variable("beta", true);
  m.zv_coef = lexmin ? -1 : 1;
  m.beta_coef = -1;
  std::vector<Term> obj;
  for (int e = 0; e < instance.graph.edge_count(); ++e)
    obj.push_back({m.ze[e], lexmin ? instance.cost[e] : -instance.cost[e]});
  for (std::size_t a = 0; a < k; ++a)
    if (fixed.is_fixed(a)) obj.push_back({m.zv[a], -*fixed.value[a]});
  obj.push_back({m.beta, lexmin ? -opt : opt});
  m.lp.set_objective(lexmin ? Sense::Minimize : Sense::Maximize, obj);
  std::vector<Term> unit;
  for (std::size_t a = 0; a < k; ++a)
    if (!fixed.is_fixed(a)) unit.push_back({m.zv[a], 1});
  m.lp.add_constraint(unit, Relation::Equal, 1);
  for (const SetCut& c : pool.cuts) m.add(c);

  LpSolution s = m.solve_with_cuts();
  if (s.status != LpStatus::Optimal)
    throw std::logic_error("branching dual round has no optimum");
  for (const SetCut& c : m.rows) pool.add(c);
  RoundOutcome out;
  out.alpha = s.objective;
  for (std::size_t a = 0; a < k; ++a)
    out.z.push_back(fixed.is_fixed(a) ? Rational(0) : s.primal[m.zv[a]]);
  return out;
}

BranchingLeximin run_series(const BranchingInstance& instance,
                            Direction direction) {
  validate(instance);
  Rational opt = branching_value(instance);
  SharedPool pool = seed_pool(instance);
  std::size_t k = agents(instance).size();
  BranchingLeximin out;
  if (k == 0) return out;
  LeximinResult r = run_fixing_rounds(k, direction, [&](const FixedSet& f) {
    return series_round(instance, opt, f, direction, pool);
  });
  out.share = std::move(r.shares);
  out.rounds = std::move(r.rounds);
  return out;
}

}  // namespace

std::vector<SetCut> separation_oracle(const BranchingInstance& instance,
                                      const std::vector<Rational>& z_edges,
                                      const std::vector<Rational>& z_agents,
                                      const Rational& beta,
                                      Direction direction) {
  CutModel m(instance);
  std::size_t k = m.agent_list.size();
  for (std::size_t a = 0; a < k; ++a) m.zv.push_back(m.lp.add_variable());
  m.beta = m.lp.add_variable("beta", true);
  m.zv_coef = direction == Direction::Leximin ? -1 : 1;
  m.beta_coef = -1;
  std::vector<Rational> point(m.lp.variable_count());
  for (int e = 0; e < instance.graph.edge_count(); ++e) {
    if (z_edges[e] < 0) throw DimensionMismatch("negative edge value");
    point[m.ze[e]] = z_edges[e];
  }
  for (std::size_t a = 0; a < k; ++a) point[m.zv[a]] = z_agents[a];
  point[m.beta] = beta;
  return m.violated(point, false);
}

BranchingMembership check_owen_membership(const BranchingInstance& instance,
                                          const CostShare& share) {
  validate(instance);
  Rational opt = branching_value(instance);
  CutModel m(instance);
  std::size_t k = m.agent_list.size();
  if (share.size() != k) throw NotAnImputation("expected one share per agent");
  Rational total = 0;
  for (const Rational& s : share) total += s;
  if (total != opt)
    throw NotAnImputation("shares sum to " + to_string(total) +
                          ", the branching costs " + to_string(opt));
  for (const Rational& s : share)
    if (s < 0) return {false, std::nullopt, "negative share"};

  // min sum c z(e) + sum p z(v) over sum_{out(S)} z(e) + z(v) >= 1. Its dual
  // packs y(S, v) under c with agent totals at most p; the share is in the
  // Owen set iff the packing reaches the full cost.
  for (std::size_t a = 0; a < k; ++a) m.zv.push_back(m.lp.add_variable());
  m.zv_coef = 1;
  m.constant.assign(k, 1);
  std::vector<Term> obj;
  for (int e = 0; e < instance.graph.edge_count(); ++e)
    obj.push_back({m.ze[e], instance.cost[e]});
  for (std::size_t a = 0; a < k; ++a) obj.push_back({m.zv[a], share[a]});
  m.lp.set_objective(Sense::Minimize, obj);
  m.first_cut_row = m.lp.constraint_count();
  for (const SetCut& c : seed_pool(instance).cuts) m.add(c);
  LpSolution s = m.solve_with_cuts();
  if (s.status != LpStatus::Optimal)
    throw std::logic_error("membership LP has no optimum");
  if (s.objective != opt)
    return {false, std::nullopt, "no split of a cost packing gives these shares"};
  DualCutSolution cert;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const Rational& y = s.dual[m.first_cut_row + i];
    if (y > 0) cert.split.push_back({m.rows[i].set, m.rows[i].vertex, y});
  }
  return {true, std::move(cert), {}};
}

BranchingLeximin leximin_owen(const BranchingInstance& instance) {
  return run_series(instance, Direction::Leximin);
}

BranchingLeximin leximax_owen(const BranchingInstance& instance) {
  return run_series(instance, Direction::Leximax);
}

Rational first_round_value(const BranchingInstance& instance) {
  validate(instance);
  SharedPool pool = seed_pool(instance);
  FixedSet none(agents(instance).size());
  return series_round(instance, branching_value(instance), none,
                      Direction::Leximin, pool)
      .alpha;
}

BranchingLeximin leximin_owen_concise(const BranchingInstance& instance) {
  validate(instance);
  BranchingSolution sol = min_cost_branching(instance);
  const DiGraph& g = instance.graph;
  int n = g.vertex_count();
  std::vector<int> parent_edge(n, -1);
  for (EdgeId e : sol.branching.edges) parent_edge[g.edge(e).tail] = e;
  std::vector<char> tree(g.edge_count(), 0);
  for (EdgeId e : sol.branching.edges) tree[e] = 1;
  // V' of tree edge (u, w): vertices whose tree path to r passes u
  std::vector<std::vector<char>> below(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v)
    for (int x = v; x != instance.root; x = g.edge(parent_edge[x]).head)
      below[x][v] = 1;

  std::size_t k = agents(instance).size();
  SharedPool pool;
  for (const BranchingCut& cut : sol.dual)
    for (VertexId v : cut.set) pool.add({cut.set, v});

  auto contiguous_cuts = [&](const CutModel& m, std::span<const Rational> point,
                             bool ray) {
    std::vector<SetCut> out;
    Rational big = 1;
    for (int e = 0; e < g.edge_count(); ++e) big += point[m.ze[e]];
    for (std::size_t a = 0; a < k; ++a) big += abs(point[m.zv[a]]);
    for (EdgeId te : sol.branching.edges) {
      int u = g.edge(te).tail, w = g.edge(te).head;
      const auto& inside = below[u];
      std::vector<char> near(n, 0);
      for (const Edge& e : g.edges()) {
        if (inside[e.tail] && !inside[e.head]) near[e.head] = 1;
        if (inside[e.head] && !inside[e.tail]) near[e.tail] = 1;
      }
      DiGraph h(n);
      CapacityMap cap;
      for (const Edge& e : g.edges()) {
        if (!inside[e.tail] && !inside[e.head]) continue;
        h.add_edge(e.tail, e.head);
        cap.push_back(tree[e.id] && e.id != te ? big : point[m.ze[e.id]]);
      }
      for (int x = 0; x < n; ++x)
        if (near[x] && x != w) {
          h.add_edge(x, w);
          cap.push_back(big);
        }
      for (int v = 0; v < n; ++v) {
        if (!inside[v]) continue;
        int a = m.agent_index[v];
        Rational need = m.threshold(a, point, ray);
        if (need <= 0) continue;
        FlowResult f = max_flow(h, cap, v, w);
        if (f.value < need) out.push_back({min_vertex_cut_side(h, cap, f, v), v});
      }
    }
    return out;
  };

  auto round = [&](const FixedSet& fixed) {
    CutModel m(instance);
    for (std::size_t a = 0; a < k; ++a)
      m.zv.push_back(m.lp.add_variable("z_v" + std::to_string(a), fixed.is_fixed(a)));
    m.zv_coef = -1;
    std::vector<Term> obj;
    for (int e = 0; e < g.edge_count(); ++e) obj.push_back({m.ze[e], instance.cost[e]});
    for (std::size_t a = 0; a < k; ++a)
      if (fixed.is_fixed(a)) obj.push_back({m.zv[a], -*fixed.value[a]});
    m.lp.set_objective(Sense::Minimize, obj);
    std::vector<Term> unit;
    for (std::size_t a = 0; a < k; ++a)
      if (!fixed.is_fixed(a)) unit.push_back({m.zv[a], 1});
    m.lp.add_constraint(unit, Relation::Equal, 1);
    for (const SetCut& c : pool.cuts) m.add(c);
    SeparationOracle oracle = [&](std::span<const Rational> point, bool ray) {
      std::vector<Constraint> out;
      for (SetCut& c : contiguous_cuts(m, point, ray)) {
        if (!m.known.insert({c.set, c.vertex}).second) continue;
        out.push_back(m.row(c));
        m.rows.push_back(std::move(c));
      }
      return out;
    };
    LpSolution s = solve_with_separation(
        m.lp, oracle, 10 * static_cast<int>(k + g.edge_count()) + 100);
    if (s.status != LpStatus::Optimal)
      throw std::logic_error("concise dual round has no optimum");
    for (const SetCut& c : m.rows) pool.add(c);
    RoundOutcome out;
    out.alpha = s.objective;
    for (std::size_t a = 0; a < k; ++a)
      out.z.push_back(fixed.is_fixed(a) ? Rational(0) : s.primal[m.zv[a]]);
    return out;
  };
  BranchingLeximin out;
  if (k == 0) return out;
  LeximinResult r = run_fixing_rounds(k, Direction::Leximin, round);
  out.share = std::move(r.shares);
  out.rounds = std::move(r.rounds);
  return out;
}

CostShare owen_from_branching_dual(const BranchingInstance& instance) {
  validate(instance);
  CutModel m(instance);
  CostShare share(m.agent_list.size(), 0);
  for (const BranchingCut& cut : min_cost_branching(instance).dual)
    share[m.agent_index[cut.set.front()]] += cut.y;
  return share;
}

ShareSampler owen_set_sampler(const BranchingInstance& instance) {
  validate(instance);
  auto pool = std::make_shared<SharedPool>(seed_pool(instance));
  Rational opt = branching_value(instance);
  return [instance, pool, opt](const std::vector<Rational>& weights) {
    // max sum w share over the Owen set, through its dual:
    // min sum c z(e) - opt beta, sum_{out(S)} z(e) - beta >= w_v
    CutModel m(instance);
    m.beta = m.lp.add_variable("beta", true);
    m.beta_coef = -1;
    m.constant = weights;
    std::vector<Term> obj;
    for (int e = 0; e < instance.graph.edge_count(); ++e)
      obj.push_back({m.ze[e], instance.cost[e]});
    obj.push_back({m.beta, -opt});
    m.lp.set_objective(Sense::Minimize, obj);
    m.first_cut_row = m.lp.constraint_count();
    for (const SetCut& c : pool->cuts) m.add(c);
    LpSolution s = m.solve_with_cuts();
    std::vector<Rational> share;
    if (s.status != LpStatus::Optimal) return share;
    for (const SetCut& c : m.rows) pool->add(c);
    share.assign(m.agent_list.size(), 0);
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      share[m.agent_index[m.rows[i].vertex]] += s.dual[m.first_cut_row + i];
    return share;
  };
}

}  // namespace owen
