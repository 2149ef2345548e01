#include "owen/verify.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "owen/errors.hpp"

namespace owen {

GameKind kind_of(const GameInstance& instance) {
  return static_cast<GameKind>(instance.index());
}

int agent_count(const GameInstance& instance) {
  switch (kind_of(instance)) {
    case GameKind::MaxFlow:
      return std::get<MaxFlowInstance>(instance).graph.edge_count();
    case GameKind::Branching:
      return std::get<BranchingInstance>(instance).graph.vertex_count() - 1;
    case GameKind::BMatching:
      return std::get<BMatchingInstance>(instance).agent_count();
  }
  return 0;
}

bool is_cost_game(const GameInstance& instance) {
  return kind_of(instance) == GameKind::Branching;
}

Rational game_value(const GameInstance& instance) {
  std::uint64_t all = 0;
  int k = agent_count(instance);
  if (k > 64) throw TooLarge("more than 64 agents");
  all = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  if (auto v = coalition_value(instance, all)) return *v;
  throw Disconnected("the grand coalition cannot reach the root");
}

namespace {

struct Arc {
  int to;
  long cap;
  Rational cost;
};

// Successive shortest paths with Bellman-Ford; stops once the cheapest
// augmenting path no longer has negative cost.
Rational max_weight_by_flow(int n, int source, int sink,
                            const std::vector<std::tuple<int, int, long, Rational>>& arcs) {
  std::vector<Arc> e;
  std::vector<std::vector<int>> out(n);
  for (auto& [a, b, cap, cost] : arcs) {
    out[a].push_back(static_cast<int>(e.size()));
    e.push_back({b, cap, cost});
    out[b].push_back(static_cast<int>(e.size()));
    e.push_back({a, 0, -cost});
  }
  Rational total = 0;
  for (;;) {
    std::vector<std::optional<Rational>> dist(n);
    std::vector<int> via(n, -1);
    dist[source] = Rational(0);
    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (int u = 0; u < n; ++u) {
        if (!dist[u]) continue;
        for (int id : out[u]) {
          if (e[id].cap == 0) continue;
          Rational d = *dist[u] + e[id].cost;
          if (!dist[e[id].to] || d < *dist[e[id].to]) {
            dist[e[id].to] = d;
            via[e[id].to] = id;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!dist[sink] || *dist[sink] >= 0) break;
    long push = -1;
    for (int v = sink; v != source; v = e[via[v] ^ 1].to)
      push = push < 0 ? e[via[v]].cap : std::min(push, e[via[v]].cap);
    for (int v = sink; v != source; v = e[via[v] ^ 1].to) {
      e[via[v]].cap -= push;
      e[via[v] ^ 1].cap += push;
    }
    total -= *dist[sink] * push;
  }
  return total;
}

}  // namespace

Rational bmatching_value_by_flow(const BMatchingInstance& instance,
                                 std::uint64_t coalition) {
  int k = instance.agent_count();
  int source = k, sink = k + 1;
  std::vector<std::tuple<int, int, long, Rational>> arcs;
  auto in = [&](int a) { return (coalition >> a & 1) != 0; };
  for (int a = 0; a < k; ++a) {
    if (!in(a)) continue;
    if (a < instance.left_count)
      arcs.emplace_back(source, a, instance.b[a], Rational(0));
    else
      arcs.emplace_back(a, sink, instance.b[a], Rational(0));
  }
  for (const BEdge& edge : instance.edges) {
    int l = instance.left_agent(edge.left), r = instance.right_agent(edge.right);
    if (in(l) && in(r))
      arcs.emplace_back(l, r, std::min(instance.b[l], instance.b[r]), -edge.weight);
  }
  return max_weight_by_flow(k + 2, source, sink, arcs);
}

std::optional<Rational> coalition_value(const GameInstance& instance,
                                        std::uint64_t coalition) {
  if (auto* f = std::get_if<MaxFlowInstance>(&instance)) {
    CapacityMap cap = f->capacity;
    for (int e = 0; e < f->graph.edge_count(); ++e)
      if (!(coalition >> e & 1)) cap[e] = 0;
    return max_flow(f->graph, cap, f->source, f->sink).value;
  }
  if (auto* b = std::get_if<BranchingInstance>(&instance)) {
    std::vector<char> keep(b->graph.vertex_count(), 0);
    std::vector<VertexId> list = agents(*b);
    for (std::size_t i = 0; i < list.size(); ++i)
      keep[list[i]] = (coalition >> i & 1) != 0;
    return min_branching_cost(*b, keep);
  }
  return bmatching_value_by_flow(std::get<BMatchingInstance>(instance), coalition);
}

CoreVerdict verify_core(const GameInstance& instance,
                        const std::vector<Rational>& imputation, int bound) {
  int k = agent_count(instance);
  if (k > bound || k > 63)
    throw TooLarge(std::to_string(k) + " agents exceed the bound of " +
                   std::to_string(bound));
  if (static_cast<int>(imputation.size()) != k)
    throw NotAnImputation("expected " + std::to_string(k) + " shares");
  Rational worth = game_value(instance);
  if (sum(imputation) != worth)
    throw NotAnImputation("shares sum to " + to_string(sum(imputation)) +
                          ", the game is worth " + to_string(worth));
  bool cost = is_cost_game(instance);
  std::uint64_t end = std::uint64_t{1} << k;
  for (std::uint64_t s = 1; s < end; ++s) {
    std::optional<Rational> value = coalition_value(instance, s);
    if (!value) continue;
    Rational share = 0;
    for (int i = 0; i < k; ++i)
      if (s >> i & 1) share += imputation[i];
    if (cost ? share > *value : share < *value)
      return CoreViolation{s, *value, share};
  }
  return CoreOk{};
}

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

MaxFlowInstance random_flow(const GeneratorParams& p, Rng& rng) {
  int n = uniform(rng, std::max(2, p.min_vertices), std::max(2, p.max_vertices));
  int m_max = std::max(1, p.max_edges);
  // a random s-t path first so that the sink is reachable
  std::vector<int> inner;
  for (int v = 1; v < n - 1; ++v) inner.push_back(v);
  std::shuffle(inner.begin(), inner.end(), rng);
  int hops = uniform(rng, 0, std::min<int>(inner.size(), m_max - 1));
  MaxFlowInstance inst{DiGraph(n), {}, 0, n - 1};
  int at = 0;
  for (int i = 0; i < hops; ++i) {
    inst.graph.add_edge(at, inner[i]);
    at = inner[i];
  }
  inst.graph.add_edge(at, n - 1);
  int m = uniform(rng, std::max(inst.graph.edge_count(), std::min(p.min_edges, m_max)), m_max);
  while (inst.graph.edge_count() < m) {
    int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
    if (a != b) inst.graph.add_edge(a, b);
  }
  for (int e = 0; e < m; ++e)
    inst.capacity.push_back(uniform(rng, std::max(1, p.min_value), p.max_value));
  return inst;
}

BranchingInstance random_branching(const GeneratorParams& p, Rng& rng) {
  int n = uniform(rng, std::max(2, p.min_vertices), std::max(2, p.max_vertices));
  n = std::max(2, std::min(n, p.max_edges + 1));
  BranchingInstance inst{DiGraph(n), {}, 0};
  for (int v = 1; v < n; ++v) inst.graph.add_edge(v, uniform(rng, 0, v - 1));
  int m = uniform(rng, std::max(n - 1, std::min(p.min_edges, p.max_edges)),
                  std::max(n - 1, p.max_edges));
  while (inst.graph.edge_count() < m) {
    int a = uniform(rng, 1, n - 1), b = uniform(rng, 0, n - 1);
    if (a != b) inst.graph.add_edge(a, b);
  }
  for (int e = 0; e < m; ++e)
    inst.cost.push_back(uniform(rng, std::max(0, p.min_value), p.max_value));
  return inst;
}

BMatchingInstance random_bmatching(const GeneratorParams& p, Rng& rng) {
  int n = uniform(rng, std::max(2, p.min_vertices), std::max(2, p.max_vertices));
  n = std::min(n, std::max(2, p.max_b_sum));
  BMatchingInstance inst;
  inst.left_count = uniform(rng, 1, n - 1);
  inst.right_count = n - inst.left_count;
  int room = p.max_b_sum - n;
  for (int a = 0; a < n; ++a) {
    int extra = uniform(rng, 0, std::max(0, std::min(p.max_b - 1, room)));
    room -= extra;
    inst.b.push_back(1 + extra);
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < inst.left_count; ++i)
    for (int j = 0; j < inst.right_count; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  int m = uniform(rng, 1, std::min<int>(pairs.size(), std::max(1, p.max_edges)));
  pairs.resize(m);
  std::sort(pairs.begin(), pairs.end());
  for (auto [i, j] : pairs)
    inst.edges.push_back({i, j, uniform(rng, std::max(1, p.min_value), p.max_value)});
  return inst;
}

}  // namespace

GameInstance random_instance(const GeneratorParams& params) {
  Rng rng(params.seed);
  switch (params.kind) {
    case GameKind::MaxFlow:
      return random_flow(params, rng);
    case GameKind::Branching:
      return random_branching(params, rng);
    case GameKind::BMatching:
      return random_bmatching(params, rng);
  }
  return random_flow(params, rng);
}

}  // namespace owen
