#pragma once

#include <optional>
#include <string>
#include <vector>

#include "owen/graph.hpp"
#include "owen/leximin.hpp"
#include "owen/lp.hpp"

namespace owen {

// Agents are the edges; an imputation is indexed by edge id.
using Imputation = std::vector<Rational>;

struct MaxFlowInstance {
  DiGraph graph;
  CapacityMap capacity;
  VertexId source = 0;
  VertexId sink = 0;
};

// Throws ValidationError (bad endpoints, non-positive capacity).
void validate(const MaxFlowInstance& instance);

struct FlowDual {
  std::vector<Rational> potential;  // pi, per vertex
  std::vector<Rational> length;     // delta, per edge
};

bool is_feasible_flow_dual(const MaxFlowInstance& instance,
                           const FlowDual& dual);

Imputation owen_from_dual(const MaxFlowInstance& instance,
                          const FlowDual& dual);

struct PQStructure {
  CondensationDAG dag;
  FlowResult flow;
  int source_component = 0;
  int sink_component = 0;
  std::vector<char> full;         // per dag edge: true for F', false for Z'
  std::vector<EdgeId> original;   // per dag edge: original edge id
  std::vector<Rational> length;   // per dag edge: 1/c on F', 0 on Z'
};

PQStructure build_pq_structure(const MaxFlowInstance& instance);

struct MaxFlowLeximin {
  Imputation profit;
  FlowDual dual;
  std::vector<Rational> alphas;  // in the order chosen
};

// Longest-free-path algorithm on the PQ structure.
MaxFlowLeximin leximin_owen(const MaxFlowInstance& instance);

// LP series over the dual of the flow LP.
Imputation leximin_owen_lp(const MaxFlowInstance& instance);
Imputation leximax_owen(const MaxFlowInstance& instance);

// The flow dual LP: variables pi (per vertex) then delta (per edge),
// minimizing sum c*delta. Profit of edge e is c_e * delta_e.
LeximinProblem flow_dual_problem(const MaxFlowInstance& instance);
int delta_var(const MaxFlowInstance& instance, EdgeId e);
FlowDual flow_dual_from_point(const MaxFlowInstance& instance,
                              const std::vector<Rational>& point);

// Optimal dual as returned by the simplex on the flow dual LP.
FlowDual any_optimal_dual(const MaxFlowInstance& instance);

struct FlowMembership {
  bool member = false;
  std::optional<FlowDual> certificate;
  std::string reason;
};

// Throws NotAnImputation when the profits do not sum to the max-flow value.
FlowMembership check_owen_membership(const MaxFlowInstance& instance,
                                     const Imputation& profit);

}  // namespace owen
