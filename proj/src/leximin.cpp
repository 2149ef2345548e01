#include "owen/leximin.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <stdexcept>

#include "owen/errors.hpp"

namespace owen {

std::size_t FixedSet::unfixed_count() const {
  return static_cast<std::size_t>(
      std::count_if(value.begin(), value.end(),
                    [](const auto& v) { return !v.has_value(); }));
}

LeximinResult run_fixing_rounds(std::size_t tracked, Direction direction,
                                const RoundSolver& solve_round) {
  FixedSet fixed(tracked);
  LeximinResult result;
  while (fixed.unfixed_count() > 0) {
    RoundOutcome out = solve_round(fixed);
    if (!result.rounds.empty()) {
      const Rational& last = result.rounds.back().alpha;
      bool backwards = direction == Direction::Leximin ? out.alpha < last
                                                       : out.alpha > last;
      if (backwards) throw std::logic_error("alpha sequence is not monotone");
    }
    LeximinRound round{out.alpha, {}, std::move(out.z)};
    for (std::size_t i = 0; i < tracked; ++i) {
      if (fixed.is_fixed(i)) {
        round.z[i] = 0;
      } else if (round.z[i] > 0) {
        round.newly_fixed.push_back(static_cast<int>(i));
      }
    }
    if (round.newly_fixed.empty())
      throw NoPositiveDual("round " + std::to_string(result.rounds.size()) +
                           " has no positive dual on an unfixed share");
    for (int i : round.newly_fixed) fixed.value[i] = out.alpha;
    result.rounds.push_back(std::move(round));
    result.point = std::move(out.point);
  }
  for (auto& v : fixed.value) result.shares.push_back(*v);
  return result;
}

namespace {

struct PinnedBase {
  LinearProgram lp;  // base plus cuts found so far plus the objective pin
  int base_vars = 0;
};

LpSolution solve_maybe_separated(LinearProgram& lp,
                                 const SeparationOracle* separation) {
  if (separation) return solve_with_separation(lp, *separation);
  return solve(lp);
}

PinnedBase pin_base(const LeximinProblem& problem,
                    const SeparationOracle* separation) {
  if (problem.shares.empty())
    throw MalformedModel("leximin problem tracks no shares");
  PinnedBase pinned{problem.base, problem.base.variable_count()};
  LpSolution s = solve_maybe_separated(pinned.lp, separation);
  if (s.status == LpStatus::Infeasible)
    throw InfeasibleBase("base LP is infeasible");
  if (s.status == LpStatus::Unbounded)
    throw UnboundedBase("base LP is unbounded");
  if (!problem.base.objective().empty())
    pinned.lp.add_constraint(problem.base.objective(), Relation::Equal,
                             s.objective, "pin");
  return pinned;
}

}  // namespace

LeximinResult lexi_optimize(const LeximinProblem& problem, Direction direction,
                            const SeparationOracle* separation) {
  PinnedBase pinned = pin_base(problem, separation);
  bool lexmin = direction == Direction::Leximin;
  std::size_t k = problem.shares.size();

  auto round = [&](const FixedSet& fixed) {
    LinearProgram lp = pinned.lp;
    int alpha = lp.add_variable("alpha", true);
    std::vector<int> row(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Term> terms = problem.shares[i];
      if (fixed.is_fixed(i)) {
        row[i] = lp.add_constraint(terms, Relation::Equal, *fixed.value[i]);
      } else {
        terms.push_back({alpha, -1});
        row[i] = lp.add_constraint(
            terms, lexmin ? Relation::GreaterEqual : Relation::LessEqual, 0);
      }
    }
    lp.set_objective(lexmin ? Sense::Maximize : Sense::Minimize,
                     {{alpha, 1}});
    int before = lp.constraint_count();
    LpSolution s = solve_maybe_separated(lp, separation);
    if (s.status == LpStatus::Infeasible)
      throw InfeasibleBase("round LP became infeasible");
    if (s.status == LpStatus::Unbounded)
      throw UnboundedBase("round LP is unbounded");
    // cuts only involve base variables, keep them for later rounds
    for (int i = before; i < lp.constraint_count(); ++i)
      pinned.lp.add_constraint(lp.constraint(i));
    RoundOutcome out;
    out.alpha = s.objective;
    out.z.resize(k);
    for (std::size_t i = 0; i < k; ++i)
      if (!fixed.is_fixed(i)) out.z[i] = -s.dual[row[i]];
    out.point.assign(s.primal.begin(), s.primal.begin() + pinned.base_vars);
    return out;
  };
  return run_fixing_rounds(k, direction, round);
}

LeximinResult leximin(const LeximinProblem& problem,
                      const SeparationOracle* separation) {
  return lexi_optimize(problem, Direction::Leximin, separation);
}

LeximinResult leximax(const LeximinProblem& problem,
                      const SeparationOracle* separation) {
  return lexi_optimize(problem, Direction::Leximax, separation);
}

bool lex_better(std::vector<Rational> a, std::vector<Rational> b,
                Direction direction) {
  if (direction == Direction::Leximin) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
  } else {
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
  }
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] == b[i]) continue;
    return direction == Direction::Leximin ? a[i] > b[i] : a[i] < b[i];
  }
  return false;
}

LexVerdict verify_lexicographic(std::size_t tracked,
                                const std::vector<Rational>& candidate,
                                const ShareSampler& sampler,
                                Direction direction, int sample_count,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(-5, 5);
  std::uniform_int_distribution<int> step(1, 63);

  int extreme_count = std::min<int>(sample_count, 4 + 2 * static_cast<int>(tracked));
  std::vector<std::vector<Rational>> extremes;
  int used = 0;
  auto check = [&](const std::vector<Rational>& point) -> bool {
    ++used;
    return lex_better(point, candidate, direction);
  };
  for (int e = 0; e < extreme_count; ++e) {
    std::vector<Rational> w(tracked);
    if (e < 2 * static_cast<int>(tracked)) {
      // each share pushed up and down in turn
      w[e / 2] = e % 2 ? -1 : 1;
    } else {
      for (auto& x : w) x = weight(rng);
    }
    std::vector<Rational> point = sampler(w);
    if (point.empty()) continue;
    if (check(point)) return Dominated{point};
    extremes.push_back(std::move(point));
  }
  if (extremes.empty()) return VerifyOk{};
  std::uniform_int_distribution<std::size_t> pick(0, extremes.size() - 1);
  while (used < sample_count) {
    Rational t(step(rng), 64);
    t.canonicalize();
    const auto& a = extremes[pick(rng)];
    // alternate between segments to the candidate and between extremes
    const auto& b = used % 2 ? candidate : extremes[pick(rng)];
    std::vector<Rational> point(tracked);
    for (std::size_t i = 0; i < tracked; ++i)
      point[i] = (1 - t) * b[i] + t * a[i];
    if (check(point)) return Dominated{point};
  }
  return VerifyOk{};
}

ShareSampler optimal_face_sampler(const LeximinProblem& problem,
                                  const SeparationOracle* separation) {
  auto pinned = std::make_shared<PinnedBase>(pin_base(problem, separation));
  return [pinned, shares = problem.shares,
          separation](const std::vector<Rational>& weights) {
    LinearProgram lp = pinned->lp;
    std::vector<Term> obj;
    for (std::size_t i = 0; i < shares.size(); ++i)
      for (const Term& t : shares[i]) obj.push_back({t.var, t.coef * weights[i]});
    lp.set_objective(Sense::Maximize, obj);
    LpSolution s = solve_maybe_separated(lp, separation);
    std::vector<Rational> out;
    if (s.status != LpStatus::Optimal) return out;
    for (const auto& expr : shares) out.push_back(evaluate(expr, s.primal));
    return out;
  };
}

LexVerdict verify_leximin(const LeximinProblem& problem,
                          const std::vector<Rational>& candidate,
                          int sample_count, std::uint64_t seed) {
  return verify_lexicographic(problem.shares.size(), candidate,
                              optimal_face_sampler(problem),
                              Direction::Leximin, sample_count, seed);
}

LexVerdict verify_leximax(const LeximinProblem& problem,
                          const std::vector<Rational>& candidate,
                          int sample_count, std::uint64_t seed) {
  return verify_lexicographic(problem.shares.size(), candidate,
                              optimal_face_sampler(problem),
                              Direction::Leximax, sample_count, seed);
}

}  // namespace owen
