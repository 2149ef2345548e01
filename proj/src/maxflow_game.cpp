#include "owen/maxflow_game.hpp"

#include <algorithm>
#include <stdexcept>

#include "owen/errors.hpp"

namespace owen {

void validate(const MaxFlowInstance& instance) {
  const DiGraph& g = instance.graph;
  if (!g.has_vertex(instance.source) || !g.has_vertex(instance.sink))
    throw ValidationError("source or sink is not a vertex");
  if (instance.source == instance.sink)
    throw ValidationError("source and sink coincide");
  if (static_cast<int>(instance.capacity.size()) != g.edge_count())
    throw ValidationError("capacity count does not match edge count");
  for (int e = 0; e < g.edge_count(); ++e)
    if (instance.capacity[e] <= 0)
      throw ValidationError("edge " + std::to_string(e) +
                            " has non-positive capacity");
}

namespace {

Rational flow_value(const MaxFlowInstance& inst) {
  return max_flow(inst.graph, inst.capacity, inst.source, inst.sink).value;
}

Rational dual_objective(const MaxFlowInstance& inst, const FlowDual& d) {
  Rational v = 0;
  for (int e = 0; e < inst.graph.edge_count(); ++e)
    v += inst.capacity[e] * d.length[e];
  return v;
}

FlowDual dual_from_potential(const MaxFlowInstance& inst,
                             std::vector<Rational> potential) {
  FlowDual d{std::move(potential), {}};
  for (const Edge& e : inst.graph.edges()) {
    Rational drop = d.potential[e.tail] - d.potential[e.head];
    d.length.push_back(drop > 0 ? drop : Rational(0));
  }
  return d;
}

}  // namespace

bool is_feasible_flow_dual(const MaxFlowInstance& instance,
                           const FlowDual& dual) {
  const DiGraph& g = instance.graph;
  if (static_cast<int>(dual.potential.size()) != g.vertex_count() ||
      static_cast<int>(dual.length.size()) != g.edge_count())
    return false;
  for (const Rational& p : dual.potential)
    if (p < 0) return false;
  for (const Edge& e : g.edges()) {
    if (dual.length[e.id] < 0) return false;
    if (dual.length[e.id] - dual.potential[e.tail] + dual.potential[e.head] < 0)
      return false;
  }
  return dual.potential[instance.source] - dual.potential[instance.sink] >= 1;
}

Imputation owen_from_dual(const MaxFlowInstance& instance,
                          const FlowDual& dual) {
  validate(instance);
  if (!is_feasible_flow_dual(instance, dual))
    throw NotOptimalDual("dual is not feasible");
  if (dual_objective(instance, dual) != flow_value(instance))
    throw NotOptimalDual("dual objective differs from the max-flow value");
  Imputation p;
  for (int e = 0; e < instance.graph.edge_count(); ++e)
    p.push_back(instance.capacity[e] * dual.length[e]);
  return p;
}

PQStructure build_pq_structure(const MaxFlowInstance& instance) {
  validate(instance);
  PQStructure pq;
  pq.flow = max_flow(instance.graph, instance.capacity, instance.source,
                     instance.sink);
  ResidualGraph r = residual_graph(instance.graph, instance.capacity, pq.flow);
  std::vector<Orientation> tags;
  for (const ResidualArc& a : r.origin) tags.push_back(a.orientation);
  pq.dag = condense_scc(r.graph, tags);
  pq.source_component = pq.dag.component_of[instance.source];
  pq.sink_component = pq.dag.component_of[instance.sink];
  for (int e = 0; e < pq.dag.dag.edge_count(); ++e) {
    const ResidualArc& arc = r.origin[pq.dag.provenance[e]];
    EdgeId orig = arc.original;
    bool full = arc.orientation == Orientation::Reverse;
    // partially used edges always fall inside one component
    if (full ? pq.flow.flow[orig] != instance.capacity[orig]
             : pq.flow.flow[orig] != 0)
      throw std::logic_error("PQ edge is neither full nor empty");
    pq.full.push_back(full);
    pq.original.push_back(orig);
    pq.length.push_back(full ? Rational(1) / instance.capacity[orig]
                             : Rational(0));
  }
  if (pq.source_component == pq.sink_component)
    throw std::logic_error("source and sink share a residual component");
  return pq;
}

MaxFlowLeximin leximin_owen(const MaxFlowInstance& instance) {
  PQStructure pq = build_pq_structure(instance);
  const DiGraph& dag = pq.dag.dag;
  int k = dag.vertex_count();
  std::vector<std::optional<Rational>> pot(k);
  pot[pq.source_component] = Rational(1);
  pot[pq.sink_component] = Rational(0);
  MaxFlowLeximin out;

  std::vector<char> free(k);
  while (true) {
    for (int c = 0; c < k; ++c) free[c] = !pot[c];
    bool found = false;
    Rational best_alpha;
    int best_u = -1;
    EdgeId best_last = -1;
    LongestPaths best_paths;
    for (int u = 0; u < k; ++u) {
      if (!pot[u]) continue;
      LongestPaths lp = longest_path_dag(dag, pq.length, u,
                                         pq.dag.topological_order, free);
      for (int v = 0; v < k; ++v) {
        if (!pot[v] || v == u) continue;
        // longest path into v whose last interior vertex is free
        std::optional<Rational> len;
        EdgeId last = -1;
        for (EdgeId e : dag.in_edges(v)) {
          int w = dag.edge(e).tail;
          if (!free[w] || !lp.distance[w]) continue;
          Rational cand = *lp.distance[w] + pq.length[e];
          if (!len || cand > *len ||
              (cand == *len && (w < dag.edge(last).tail ||
                                (w == dag.edge(last).tail && e < last)))) {
            len = cand;
            last = e;
          }
        }
        if (!len) continue;
        if (*pot[u] > *pot[v])
          throw std::logic_error("free path runs against the potentials");
        if (*len == 0) continue;
        Rational alpha = (*pot[v] - *pot[u]) / *len;
        if (!found || alpha < best_alpha) {
          found = true;
          best_alpha = alpha;
          best_u = u;
          best_last = last;
          best_paths = lp;
        }
      }
    }
    if (!found) break;
    // walk the chosen path back to u, then assign potentials forward
    std::vector<EdgeId> path{best_last};
    int cur = dag.edge(best_last).tail;
    while (cur != best_u) {
      EdgeId e = *best_paths.predecessor[cur];
      path.push_back(e);
      cur = dag.edge(e).tail;
    }
    std::reverse(path.begin(), path.end());
    Rational prefix = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      prefix += pq.length[path[i]];
      pot[dag.edge(path[i]).head] = *pot[best_u] + best_alpha * prefix;
    }
    out.alphas.push_back(best_alpha);
  }

  // Components off every free path: lowest potential compatible with their
  // predecessors, so that no edge runs downhill.
  for (int c : pq.dag.topological_order) {
    if (pot[c]) continue;
    Rational p = 0;
    for (EdgeId e : dag.in_edges(c)) p = std::max(p, *pot[dag.edge(e).tail]);
    pot[c] = p;
  }
  for (const Edge& e : dag.edges())
    if (*pot[e.tail] > *pot[e.head])
      throw std::logic_error("potentials decrease along a PQ edge");

  std::vector<Rational> potential(instance.graph.vertex_count());
  for (int v = 0; v < instance.graph.vertex_count(); ++v)
    potential[v] = *pot[pq.dag.component_of[v]];
  out.dual = dual_from_potential(instance, std::move(potential));
  if (!is_feasible_flow_dual(instance, out.dual) ||
      dual_objective(instance, out.dual) != pq.flow.value)
    throw std::logic_error("leximin potentials are not an optimal dual");
  for (int e = 0; e < instance.graph.edge_count(); ++e)
    out.profit.push_back(instance.capacity[e] * out.dual.length[e]);
  return out;
}

int delta_var(const MaxFlowInstance& instance, EdgeId e) {
  return instance.graph.vertex_count() + e;
}

LeximinProblem flow_dual_problem(const MaxFlowInstance& instance) {
  validate(instance);
  const DiGraph& g = instance.graph;
  LeximinProblem p;
  LinearProgram& lp = p.base;
  for (int v = 0; v < g.vertex_count(); ++v)
    lp.add_variable("pi" + std::to_string(v));
  for (int e = 0; e < g.edge_count(); ++e)
    lp.add_variable("delta" + std::to_string(e));
  std::vector<Term> obj;
  for (const Edge& e : g.edges()) {
    int d = delta_var(instance, e.id);
    lp.add_constraint({{d, 1}, {e.tail, -1}, {e.head, 1}},
                      Relation::GreaterEqual, 0);
    obj.push_back({d, instance.capacity[e.id]});
    p.shares.push_back({{d, instance.capacity[e.id]}});
  }
  lp.add_constraint({{instance.source, 1}, {instance.sink, -1}},
                    Relation::GreaterEqual, 1);
  lp.set_objective(Sense::Minimize, obj);
  return p;
}

FlowDual flow_dual_from_point(const MaxFlowInstance& instance,
                              const std::vector<Rational>& point) {
  int n = instance.graph.vertex_count();
  FlowDual d;
  d.potential.assign(point.begin(), point.begin() + n);
  d.length.assign(point.begin() + n,
                  point.begin() + n + instance.graph.edge_count());
  return d;
}

FlowDual any_optimal_dual(const MaxFlowInstance& instance) {
  LeximinProblem p = flow_dual_problem(instance);
  LpSolution s = solve(p.base);
  if (s.status != LpStatus::Optimal)
    throw std::logic_error("flow dual LP has no optimum");
  return flow_dual_from_point(instance, s.primal);
}

Imputation leximin_owen_lp(const MaxFlowInstance& instance) {
  return leximin(flow_dual_problem(instance)).shares;
}

Imputation leximax_owen(const MaxFlowInstance& instance) {
  return leximax(flow_dual_problem(instance)).shares;
}

FlowMembership check_owen_membership(const MaxFlowInstance& instance,
                                     const Imputation& profit) {
  PQStructure pq = build_pq_structure(instance);
  const DiGraph& g = instance.graph;
  if (static_cast<int>(profit.size()) != g.edge_count())
    throw NotAnImputation("expected one profit per edge");
  Rational total = 0;
  for (const Rational& p : profit) total += p;
  if (total != pq.flow.value)
    throw NotAnImputation("profits sum to " + to_string(total) +
                          ", the game is worth " + to_string(pq.flow.value));
  for (const Rational& p : profit)
    if (p < 0) return {false, std::nullopt, "negative profit"};

  std::vector<char> essential(g.edge_count(), 0);
  for (int e = 0; e < pq.dag.dag.edge_count(); ++e)
    if (pq.full[e]) essential[pq.original[e]] = 1;
  for (int e = 0; e < g.edge_count(); ++e)
    if (!essential[e] && profit[e] > 0)
      return {false, std::nullopt, "inessential edge paid"};

  std::vector<Rational> delta(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e)
    delta[e] = profit[e] / instance.capacity[e];

  // Essential edges are tight: pi_tail = pi_head + delta. Propagate from the
  // sink component in lowest-edge-id order until nothing changes.
  const DiGraph& dag = pq.dag.dag;
  int k = dag.vertex_count();
  std::vector<std::optional<Rational>> pot(k);
  pot[pq.sink_component] = Rational(0);
  std::vector<int> full_edges;
  for (int e = 0; e < dag.edge_count(); ++e)
    if (pq.full[e]) full_edges.push_back(e);
  std::sort(full_edges.begin(), full_edges.end(),
            [&](int a, int b) { return pq.original[a] < pq.original[b]; });
  for (bool changed = true; changed;) {
    changed = false;
    for (int e : full_edges) {
      // dag edge runs head(orig) -> tail(orig)
      int low = dag.edge(e).tail, high = dag.edge(e).head;
      const Rational& d = delta[pq.original[e]];
      if (pot[low] && !pot[high]) {
        pot[high] = *pot[low] + d;
        changed = true;
      } else if (pot[high] && !pot[low]) {
        pot[low] = *pot[high] - d;
        changed = true;
      } else if (pot[low] && pot[high] && *pot[high] != *pot[low] + d) {
        return {false, std::nullopt, "potential conflict"};
      }
    }
  }
  for (const auto& p : pot)
    if (p && *p < 0) return {false, std::nullopt, "potential conflict"};

  // Remaining components: least potentials meeting every lower bound
  // pi_head >= pi_tail - delta and pi_s >= pi_t + 1 on top of pi >= 0.
  std::vector<Rational> pi(k);
  std::vector<char> pinned(k);
  for (int c = 0; c < k; ++c) {
    pinned[c] = pot[c].has_value();
    pi[c] = pinned[c] ? *pot[c] : Rational(0);
  }
  auto raise = [&](int c, const Rational& bound) -> int {
    if (pi[c] >= bound) return 0;
    if (pinned[c]) return -1;
    pi[c] = bound;
    return 1;
  };
  const auto& comp = pq.dag.component_of;
  int s = comp[instance.source], t = comp[instance.sink];
  bool feasible = true;
  for (int pass = 0; feasible; ++pass) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      int r = raise(comp[e.head], pi[comp[e.tail]] - delta[e.id]);
      if (r < 0) feasible = false;
      changed |= r > 0;
    }
    int r = raise(s, pi[t] + 1);
    if (r < 0) feasible = false;
    changed |= r > 0;
    if (!changed) break;
    if (pass > k + 1) feasible = false;
  }
  std::vector<Rational> potential(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) potential[v] = pi[comp[v]];
  FlowDual cert{std::move(potential), std::move(delta)};
  if (!feasible || !is_feasible_flow_dual(instance, cert))
    return {false, std::nullopt, "no feasible potentials"};
  return {true, std::move(cert), {}};
}

}  // namespace owen
