#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "owen/instance_io.hpp"

namespace owen {

enum class Command { Leximin, Leximax, OwenCheck, CoreCheck, Value, Certify };
enum class Method { Default, Combinatorial, Lp, Both };
enum class Format { Human, Machine };

struct RunFlags {
  Method method = Method::Default;
  Format format = Format::Machine;
  std::uint64_t seed = 1;
  int max_agents = kDefaultAgentBound;
  std::optional<std::vector<Rational>> shares;
  bool timing = false;
  int samples = 1000;  // sampled points for the lexicographic check of certify
};

struct ResultReport {
  nlohmann::ordered_json body;
  int exit_code = 0;  // 0 success/yes, 1 no/violation, 2 usage/validation

  std::string render(Format format) const;
};

std::optional<Command> parse_command(const std::string& name);
std::optional<Method> parse_method(const std::string& name);

// Throws UnsupportedMethod, AgentBoundExceeded, NotAnImputation.
ResultReport run(Command command, const LoadedInstance& instance,
                 const RunFlags& flags);

// Shares as "name=p/q,name=p/q" (missing agents get 0), or a path to a JSON
// file holding {"shares": {...}} or a bare name -> value object.
std::vector<Rational> parse_shares(const std::string& text,
                                   const LoadedInstance& instance);

}  // namespace owen
