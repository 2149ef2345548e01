#pragma once

#include <optional>
#include <span>
#include <vector>

#include "owen/rational.hpp"

namespace owen {

using VertexId = int;
using EdgeId = int;

struct Edge {
  EdgeId id;
  VertexId tail;
  VertexId head;
};

// Directed multigraph with dense vertex and edge ids.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(int vertex_count);

  EdgeId add_edge(VertexId tail, VertexId head);

  int vertex_count() const { return static_cast<int>(out_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeId> out_edges(VertexId v) const { return out_[v]; }
  std::span<const EdgeId> in_edges(VertexId v) const { return in_[v]; }
  bool has_vertex(VertexId v) const { return v >= 0 && v < vertex_count(); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

// Indexed by edge id.
using CapacityMap = std::vector<Rational>;

struct FlowResult {
  std::vector<Rational> flow;
  Rational value;
};

// Exact max-flow. Capacities are scaled to integers and solved with Dinic.
FlowResult max_flow(const DiGraph& graph, const CapacityMap& capacity,
                    VertexId s, VertexId t);

enum class Orientation { Forward, Reverse };

struct ResidualArc {
  EdgeId original;
  Orientation orientation;
};

struct ResidualGraph {
  DiGraph graph;
  CapacityMap capacity;
  std::vector<ResidualArc> origin;  // per residual edge
};

ResidualGraph residual_graph(const DiGraph& graph, const CapacityMap& capacity,
                             const FlowResult& flow);

struct CondensationDAG {
  DiGraph dag;
  std::vector<int> component_of;              // vertex -> component
  std::vector<std::vector<VertexId>> members;  // component -> vertices
  std::vector<EdgeId> provenance;              // dag edge -> source edge
  std::vector<Orientation> orientation;        // dag edge -> tag
  std::vector<int> topological_order;
};

// Components are numbered in topological order. Self-loops are dropped,
// parallel edges between components are kept. `tags` optionally supplies an
// orientation per source edge (Forward when empty).
CondensationDAG condense_scc(const DiGraph& graph,
                             std::span<const Orientation> tags = {});

enum class EdgeClass { Essential, Inessential };

std::vector<EdgeClass> classify_edges(const DiGraph& graph,
                                      const CapacityMap& capacity, VertexId s,
                                      VertexId t);

struct LongestPaths {
  std::vector<std::optional<Rational>> distance;  // nullopt: unreachable
  std::vector<std::optional<EdgeId>> predecessor;
};

// Longest paths from `source` in an acyclic graph. When `pass_through` is
// given, only the source and vertices flagged true are expanded; others can
// be reached but not passed through. Ties go to the smallest predecessor
// vertex, then the smallest edge id.
LongestPaths longest_path_dag(const DiGraph& dag,
                              std::span<const Rational> length,
                              VertexId source,
                              std::span<const int> topological_order = {},
                              std::span<const char> pass_through = {});

LongestPaths longest_path_dag(const CondensationDAG& dag,
                              std::span<const Rational> length,
                              VertexId source);

std::vector<int> topological_sort(const DiGraph& graph);

// Vertices reachable from s in the residual graph of `flow`, ascending.
std::vector<VertexId> min_vertex_cut_side(const DiGraph& graph,
                                          const CapacityMap& capacity,
                                          const FlowResult& flow, VertexId s);

}  // namespace owen
