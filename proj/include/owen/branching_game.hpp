#pragma once

#include <optional>
#include <string>
#include <vector>

#include "owen/graph.hpp"
#include "owen/leximin.hpp"
#include "owen/lp.hpp"

namespace owen {

// Agents are the non-root vertices, in increasing vertex order.
struct BranchingInstance {
  DiGraph graph;
  std::vector<Rational> cost;
  VertexId root = 0;
};

// Throws ValidationError on negative costs, bad root, or a vertex that
// cannot reach the root.
void validate(const BranchingInstance& instance);

std::vector<VertexId> agents(const BranchingInstance& instance);

struct Branching {
  std::vector<EdgeId> edges;
  Rational cost;
};

// Laminar dual of the min-cost branching: y(S) for sets S not containing r.
struct BranchingCut {
  std::vector<VertexId> set;  // ascending
  Rational y;
};

struct BranchingSolution {
  Branching branching;
  std::vector<BranchingCut> dual;
};

// Chu-Liu/Edmonds toward the root. Throws Disconnected.
BranchingSolution min_cost_branching(const BranchingInstance& instance);

// Same, restricted to the vertices flagged in `keep` (root always kept).
// Returns nullopt when some kept vertex cannot reach the root.
std::optional<Rational> min_branching_cost(const BranchingInstance& instance,
                                           const std::vector<char>& keep);

// Shares indexed by agent position (see agents()).
using CostShare = std::vector<Rational>;

struct SetCut {
  std::vector<VertexId> set;  // ascending, never contains the root
  VertexId vertex;            // member of set
};

// Max-flow from v to r with capacities z_edges, compared against
// z_v + beta (Leximin) or -z_v + beta (Leximax). Returns one violated cut per
// violating agent in agent order, or an empty list when feasible.
std::vector<SetCut> separation_oracle(const BranchingInstance& instance,
                                      const std::vector<Rational>& z_edges,
                                      const std::vector<Rational>& z_agents,
                                      const Rational& beta,
                                      Direction direction);

struct SplitEntry {
  std::vector<VertexId> set;
  VertexId vertex;
  Rational y;
};

struct DualCutSolution {
  std::vector<SplitEntry> split;
};

struct BranchingMembership {
  bool member = false;
  std::optional<DualCutSolution> certificate;
  std::string reason;
};

BranchingMembership check_owen_membership(const BranchingInstance& instance,
                                          const CostShare& share);

struct BranchingLeximin {
  CostShare share;
  std::vector<LeximinRound> rounds;
};

BranchingLeximin leximin_owen(const BranchingInstance& instance);
BranchingLeximin leximax_owen(const BranchingInstance& instance);

// Alternative series restricted to sets contiguous with a fixed min-cost
// branching.
BranchingLeximin leximin_owen_concise(const BranchingInstance& instance);

// First round of the leximin series by constraint generation: the optimum of
// the dual LP with nothing fixed.
Rational first_round_value(const BranchingInstance& instance);

// A cost share built from the laminar dual of the min-cost branching, each
// y(S) split to the lowest member of S.
CostShare owen_from_branching_dual(const BranchingInstance& instance);

// Samples cost shares from the Owen set for verify_lexicographic.
ShareSampler owen_set_sampler(const BranchingInstance& instance);

}  // namespace owen
