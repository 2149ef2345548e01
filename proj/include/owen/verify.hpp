#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "owen/bmatching_game.hpp"
#include "owen/branching_game.hpp"
#include "owen/maxflow_game.hpp"

namespace owen {

using GameInstance =
    std::variant<MaxFlowInstance, BranchingInstance, BMatchingInstance>;

enum class GameKind { MaxFlow, Branching, BMatching };

GameKind kind_of(const GameInstance& instance);
int agent_count(const GameInstance& instance);
bool is_cost_game(const GameInstance& instance);

// Worth of the grand coalition.
Rational game_value(const GameInstance& instance);

// Coalitions are bitmasks over agent positions. nullopt for a branching
// coalition that cannot reach the root.
std::optional<Rational> coalition_value(const GameInstance& instance,
                                        std::uint64_t coalition);

struct CoreOk {};
struct CoreViolation {
  std::uint64_t coalition;
  Rational value;
  Rational share;
};
using CoreVerdict = std::variant<CoreOk, CoreViolation>;

constexpr int kDefaultAgentBound = 16;

// Throws TooLarge beyond `bound` agents, NotAnImputation when the shares do
// not sum to the worth. Reports the first violation in ascending bitmask
// order.
CoreVerdict verify_core(const GameInstance& instance,
                        const std::vector<Rational>& imputation,
                        int bound = kDefaultAgentBound);

struct GeneratorParams {
  GameKind kind = GameKind::MaxFlow;
  int min_vertices = 3;
  int max_vertices = 8;
  int min_edges = 0;
  int max_edges = 12;
  int min_value = 1;
  int max_value = 5;
  int max_b = 3;       // b-matching capacities
  int max_b_sum = 12;  // b-matching total capacity
  std::uint64_t seed = 1;
};

GameInstance random_instance(const GeneratorParams& params);

// Max-weight b-matching over the agents in `coalition` by successive
// shortest paths; independent of the simplex path.
Rational bmatching_value_by_flow(const BMatchingInstance& instance,
                                 std::uint64_t coalition);

}  // namespace owen
