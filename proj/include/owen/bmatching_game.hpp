#pragma once

#include <optional>
#include <string>
#include <vector>

#include "owen/leximin.hpp"
#include "owen/lp.hpp"

namespace owen {

struct BEdge {
  int left;   // index into U
  int right;  // index into V
  Rational weight;
};

// Agents are U followed by V: agent i < left_count is U[i], otherwise
// V[i - left_count].
struct BMatchingInstance {
  int left_count = 0;
  int right_count = 0;
  std::vector<int> b;  // per agent
  std::vector<BEdge> edges;

  int agent_count() const { return left_count + right_count; }
  int left_agent(int i) const { return i; }
  int right_agent(int j) const { return left_count + j; }
};

void validate(const BMatchingInstance& instance);

// u for U then v for V, per agent.
struct BMatchDual {
  std::vector<Rational> value;
};

struct BMatchingSolution {
  std::vector<long> multiplicity;  // per edge
  Rational value;
  BMatchDual dual;
};

BMatchingSolution max_weight_bmatching(const BMatchingInstance& instance);

bool is_feasible_bmatch_dual(const BMatchingInstance& instance,
                             const BMatchDual& dual);

std::vector<Rational> owen_from_dual(const BMatchingInstance& instance,
                                     const BMatchDual& dual);

// Dual LP with one variable per agent; share of agent i is b_i * u_i.
LeximinProblem bmatching_dual_problem(const BMatchingInstance& instance);

std::vector<Rational> leximin_owen(const BMatchingInstance& instance);
std::vector<Rational> leximax_owen(const BMatchingInstance& instance);

struct BMatchMembership {
  bool member = false;
  std::optional<BMatchDual> certificate;
  std::string reason;
};

BMatchMembership check_owen_membership(const BMatchingInstance& instance,
                                       const std::vector<Rational>& profit);

struct DuplicatedInstance {
  BMatchingInstance expanded;  // b == 1 everywhere
  std::vector<int> origin;     // expanded agent -> original agent
};

// Throws BoundExceeded when sum(b) exceeds `bound`.
DuplicatedInstance duplicate_reduction(const BMatchingInstance& instance,
                                       int bound = 64);

struct DuplicationLeximin {
  std::vector<Rational> profit;        // per original agent
  std::vector<Rational> copy_dual;     // per expanded agent
  DuplicatedInstance reduction;
};

// Leximin on the expanded instance with each original agent's share taken
// as the total over its copies.
DuplicationLeximin leximin_via_duplication(const BMatchingInstance& instance,
                                           int bound = 64);

}  // namespace owen
