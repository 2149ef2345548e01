#include "owen/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "owen/errors.hpp"

namespace owen {

DiGraph::DiGraph(int vertex_count) : out_(vertex_count), in_(vertex_count) {}

EdgeId DiGraph::add_edge(VertexId tail, VertexId head) {
  if (!has_vertex(tail) || !has_vertex(head))
    throw InvalidVertex("edge endpoint out of range");
  EdgeId id = edge_count();
  edges_.push_back({id, tail, head});
  out_[tail].push_back(id);
  in_[head].push_back(id);
  return id;
}

namespace {

template <class T>
class Dinic {
 public:
  explicit Dinic(int n) : adj_(n), level_(n), next_(n) {}

  int add(int u, int v, const T& cap) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({v, cap});
    adj_[u].push_back(id);
    arcs_.push_back({u, T(0)});
    adj_[v].push_back(id + 1);
    return id;
  }

  T run(int s, int t, const T& infinity) {
    T total = 0;
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        T pushed = dfs(s, t, infinity);
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  const T& residual(int arc) const { return arcs_[arc].cap; }

 private:
  struct Arc {
    int to;
    T cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int a : adj_[u]) {
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  T dfs(int u, int t, const T& limit) {
    if (u == t) return limit;
    for (int& i = next_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      int a = adj_[u][i];
      Arc& arc = arcs_[a];
      if (arc.cap <= 0 || level_[arc.to] != level_[u] + 1) continue;
      T pushed = dfs(arc.to, t, std::min<T>(limit, arc.cap));
      if (pushed > 0) {
        arcs_[a].cap -= pushed;
        arcs_[a ^ 1].cap += pushed;
        return pushed;
      }
    }
    return T(0);
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<int> next_;
};

template <class T>
std::vector<T> integer_flow(const DiGraph& g, const std::vector<T>& cap,
                            VertexId s, VertexId t, const T& infinity) {
  Dinic<T> d(g.vertex_count());
  std::vector<int> arc(g.edge_count());
  for (const Edge& e : g.edges()) arc[e.id] = d.add(e.tail, e.head, cap[e.id]);
  d.run(s, t, infinity);
  std::vector<T> flow(g.edge_count());
  for (const Edge& e : g.edges()) flow[e.id] = cap[e.id] - d.residual(arc[e.id]);
  return flow;
}

}  // namespace

FlowResult max_flow(const DiGraph& graph, const CapacityMap& capacity,
                    VertexId s, VertexId t) {
  if (!graph.has_vertex(s) || !graph.has_vertex(t))
    throw InvalidVertex("source or sink out of range");
  if (s == t) throw InvalidVertex("source equals sink");
  if (static_cast<int>(capacity.size()) != graph.edge_count())
    throw DimensionMismatch("capacity map does not cover every edge");

  mpz_class scale = 1;
  for (const Rational& c : capacity) {
    if (c < 0) throw DimensionMismatch("negative capacity");
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
  }
  std::vector<mpz_class> scaled(capacity.size());
  mpz_class total = 0;
  for (std::size_t i = 0; i < capacity.size(); ++i) {
    scaled[i] = capacity[i].get_num() * (scale / capacity[i].get_den());
    total += scaled[i];
  }

  FlowResult result;
  result.flow.resize(capacity.size());
  const mpz_class limit = mpz_class(1) << 62;
  if (total < limit) {
    std::vector<long long> cap(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) cap[i] = scaled[i].get_si();
    auto f = integer_flow<long long>(graph, cap, s, t, total.get_si() + 1);
    for (std::size_t i = 0; i < f.size(); ++i)
      result.flow[i] = Rational(mpz_class(static_cast<long>(f[i])), scale);
  } else {
    auto f = integer_flow<mpz_class>(graph, scaled, s, t, total + 1);
    for (std::size_t i = 0; i < f.size(); ++i)
      result.flow[i] = Rational(f[i], scale);
  }
  for (Rational& f : result.flow) f.canonicalize();
  result.value = 0;
  for (EdgeId e : graph.out_edges(s)) result.value += result.flow[e];
  for (EdgeId e : graph.in_edges(s)) result.value -= result.flow[e];
  return result;
}

ResidualGraph residual_graph(const DiGraph& graph, const CapacityMap& capacity,
                             const FlowResult& flow) {
  ResidualGraph r{DiGraph(graph.vertex_count()), {}, {}};
  for (const Edge& e : graph.edges()) {
    const Rational& f = flow.flow[e.id];
    if (f < capacity[e.id]) {
      r.graph.add_edge(e.tail, e.head);
      r.capacity.push_back(capacity[e.id] - f);
      r.origin.push_back({e.id, Orientation::Forward});
    }
    if (f > 0) {
      r.graph.add_edge(e.head, e.tail);
      r.capacity.push_back(f);
      r.origin.push_back({e.id, Orientation::Reverse});
    }
  }
  return r;
}

CondensationDAG condense_scc(const DiGraph& graph,
                             std::span<const Orientation> tags) {
  int n = graph.vertex_count();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0, found = 0;

  // Iterative Tarjan; components are discovered sinks first.
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& fr = call.back();
      auto out = graph.out_edges(fr.v);
      if (fr.next < out.size()) {
        int w = graph.edge(out[fr.next++]).head;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
        continue;
      }
      int v = fr.v;
      if (low[v] == index[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = found;
          if (w == v) break;
        }
        ++found;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }

  CondensationDAG out;
  out.component_of.resize(n);
  for (int v = 0; v < n; ++v) out.component_of[v] = found - 1 - comp[v];
  out.members.assign(found, {});
  for (int v = 0; v < n; ++v) out.members[out.component_of[v]].push_back(v);
  out.dag = DiGraph(found);
  for (const Edge& e : graph.edges()) {
    int a = out.component_of[e.tail], b = out.component_of[e.head];
    if (a == b) continue;
    out.dag.add_edge(a, b);
    out.provenance.push_back(e.id);
    out.orientation.push_back(tags.empty() ? Orientation::Forward : tags[e.id]);
  }
  out.topological_order.resize(found);
  for (int i = 0; i < found; ++i) out.topological_order[i] = i;
  return out;
}

std::vector<int> topological_sort(const DiGraph& graph) {
  int n = graph.vertex_count();
  std::vector<int> indegree(n, 0);
  for (const Edge& e : graph.edges()) indegree[e.head]++;
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (EdgeId e : graph.out_edges(v))
      if (--indegree[graph.edge(e).head] == 0) ready.push(graph.edge(e).head);
  }
  if (static_cast<int>(order.size()) != n)
    throw CycleDetected("graph is not acyclic");
  return order;
}

std::vector<EdgeClass> classify_edges(const DiGraph& graph,
                                      const CapacityMap& capacity, VertexId s,
                                      VertexId t) {
  FlowResult f = max_flow(graph, capacity, s, t);
  ResidualGraph r = residual_graph(graph, capacity, f);
  CondensationDAG c = condense_scc(r.graph);
  std::vector<EdgeClass> out(graph.edge_count(), EdgeClass::Inessential);
  for (const Edge& e : graph.edges()) {
    if (capacity[e.id] > 0 && f.flow[e.id] == capacity[e.id] &&
        c.component_of[e.tail] != c.component_of[e.head])
      out[e.id] = EdgeClass::Essential;
  }
  return out;
}

LongestPaths longest_path_dag(const DiGraph& dag,
                              std::span<const Rational> length,
                              VertexId source,
                              std::span<const int> topological_order,
                              std::span<const char> pass_through) {
  if (!dag.has_vertex(source)) throw InvalidVertex("source out of range");
  std::vector<int> computed;
  if (topological_order.empty()) {
    computed = topological_sort(dag);
    topological_order = computed;
  }
  int n = dag.vertex_count();
  LongestPaths out;
  out.distance.assign(n, std::nullopt);
  out.predecessor.assign(n, std::nullopt);
  out.distance[source] = Rational(0);
  Rational candidate;
  for (int v : topological_order) {
    if (!out.distance[v]) continue;
    if (v != source && !pass_through.empty() && !pass_through[v]) continue;
    const Rational& dv = *out.distance[v];
    for (EdgeId e : dag.out_edges(v)) {
      int w = dag.edge(e).head;
      candidate = dv + length[e];
      auto& dw = out.distance[w];
      bool take = !dw || candidate > *dw;
      if (!take && candidate == *dw) {
        const Edge& old = dag.edge(*out.predecessor[w]);
        take = v < old.tail || (v == old.tail && e < old.id);
      }
      if (take) {
        dw = candidate;
        out.predecessor[w] = e;
      }
    }
  }
  return out;
}

LongestPaths longest_path_dag(const CondensationDAG& dag,
                              std::span<const Rational> length,
                              VertexId source) {
  return longest_path_dag(dag.dag, length, source, dag.topological_order);
}

std::vector<VertexId> min_vertex_cut_side(const DiGraph& graph,
                                          const CapacityMap& capacity,
                                          const FlowResult& flow, VertexId s) {
  std::vector<char> seen(graph.vertex_count(), 0);
  std::vector<int> todo{s};
  seen[s] = 1;
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (EdgeId e : graph.out_edges(v)) {
      int w = graph.edge(e).head;
      if (!seen[w] && flow.flow[e] < capacity[e]) {
        seen[w] = 1;
        todo.push_back(w);
      }
    }
    for (EdgeId e : graph.in_edges(v)) {
      int w = graph.edge(e).tail;
      if (!seen[w] && flow.flow[e] > 0) {
        seen[w] = 1;
        todo.push_back(w);
      }
    }
  }
  std::vector<VertexId> side;
  for (int v = 0; v < graph.vertex_count(); ++v)
    if (seen[v]) side.push_back(v);
  return side;
}

}  // namespace owen
