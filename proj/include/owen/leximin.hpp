#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "owen/lp.hpp"

namespace owen {

enum class Direction { Leximin, Leximax };

struct LeximinProblem {
  LinearProgram base;
  // One linear expression per tracked agent.
  std::vector<std::vector<Term>> shares;
};

// Fixed values of tracked ids; nullopt means still free.
struct FixedSet {
  std::vector<std::optional<Rational>> value;

  explicit FixedSet(std::size_t n = 0) : value(n) {}
  bool is_fixed(std::size_t i) const { return value[i].has_value(); }
  std::size_t unfixed_count() const;
};

struct LeximinRound {
  Rational alpha;
  std::vector<int> newly_fixed;
  std::vector<Rational> z;  // per tracked id, zero for ids fixed earlier
};

struct LeximinResult {
  std::vector<Rational> shares;
  std::vector<LeximinRound> rounds;
  std::vector<Rational> point;  // LP point of the last round, when available
};

struct RoundOutcome {
  Rational alpha;
  std::vector<Rational> z;
  std::vector<Rational> point;
};

using RoundSolver = std::function<RoundOutcome(const FixedSet&)>;

// Drives the fixing rounds: every unfixed id with z > 0 is fixed at alpha.
// Checks monotonicity of alpha and that each round fixes something.
LeximinResult run_fixing_rounds(std::size_t tracked, Direction direction,
                                const RoundSolver& solve_round);

LeximinResult leximin(const LeximinProblem& problem,
                      const SeparationOracle* separation = nullptr);
LeximinResult leximax(const LeximinProblem& problem,
                      const SeparationOracle* separation = nullptr);
LeximinResult lexi_optimize(const LeximinProblem& problem, Direction direction,
                            const SeparationOracle* separation = nullptr);

// True when sorted(a) is lexicographically better than sorted(b): ascending
// and larger for Leximin, descending and smaller for Leximax.
bool lex_better(std::vector<Rational> a, std::vector<Rational> b,
                Direction direction);

struct VerifyOk {};
struct Dominated {
  std::vector<Rational> witness;
};
using LexVerdict = std::variant<VerifyOk, Dominated>;

// Returns the share vector of some point of the feasible set maximizing the
// given weights over tracked shares.
using ShareSampler =
    std::function<std::vector<Rational>(const std::vector<Rational>& weights)>;

// Samples `sample_count` feasible share vectors: extreme points for random
// weightings and points on segments between them and the candidate.
LexVerdict verify_lexicographic(std::size_t tracked,
                                const std::vector<Rational>& candidate,
                                const ShareSampler& sampler,
                                Direction direction, int sample_count,
                                std::uint64_t seed);

// Sampler over the optimal face of the problem's base LP.
ShareSampler optimal_face_sampler(const LeximinProblem& problem,
                                  const SeparationOracle* separation = nullptr);

LexVerdict verify_leximin(const LeximinProblem& problem,
                          const std::vector<Rational>& candidate,
                          int sample_count, std::uint64_t seed);
LexVerdict verify_leximax(const LeximinProblem& problem,
                          const std::vector<Rational>& candidate,
                          int sample_count, std::uint64_t seed);

}  // namespace owen
