#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "owen/errors.hpp"
#include "owen/report.hpp"

namespace {

int default_agent_bound() {
  if (const char* env = std::getenv("OWEN_MAX_AGENTS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring OWEN_MAX_AGENTS=" << env << "\n";
  }
  return owen::kDefaultAgentBound;
}

void report_error(const std::string& kind, std::string message,
                  owen::Format format) {
  if (message.rfind(kind + ": ", 0) == 0) message.erase(0, kind.size() + 2);
  if (format == owen::Format::Machine) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    std::cout << j.dump(2) << "\n";
  }
  std::cerr << "owen: " << message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equitable Owen-set imputations for max-flow, branching and b-matching games"};
  app.require_subcommand(1);

  std::string instance_path, method = "default", format = "machine", shares;
  owen::RunFlags flags;
  flags.max_agents = default_agent_bound();

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"leximin", "leximin Owen imputation"},
      {"leximax", "leximax Owen imputation"},
      {"owen-check", "decide Owen-set membership of --shares"},
      {"core-check", "brute-force core check of --shares"},
      {"value", "worth of the grand coalition"},
      {"certify", "membership, core and leximin sampling checks"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("instance", instance_path, "instance file (JSON)")->required();
    sub->add_option("--method", method, "combinatorial, lp or both")
        ->check(CLI::IsMember({"default", "combinatorial", "lp", "both"}));
    sub->add_option("--format", format, "machine (JSON) or human")
        ->check(CLI::IsMember({"machine", "human"}));
    sub->add_option("--seed", flags.seed, "seed for sampling");
    sub->add_option("--max-agents", flags.max_agents,
                    "agent bound for brute-force checks (env OWEN_MAX_AGENTS)");
    sub->add_option("--shares", shares, "name=p/q,... or a JSON file");
    sub->add_option("--samples", flags.samples, "sampled points for certify");
    sub->add_flag("--timing", flags.timing, "report elapsed time");
    subs.push_back(sub);
  }

  CLI::App* gen = app.add_subcommand("generate", "write an instance file to stdout");
  gen->require_subcommand(1);
  CLI::App* gen_path = gen->add_subcommand("path", "unit path with n agents");
  std::string path_game = "maxflow";
  int path_n = 3;
  gen_path->add_option("--game", path_game, "maxflow, branching or mst")
      ->check(CLI::IsMember({"maxflow", "branching", "mst"}));
  gen_path->add_option("--n", path_n, "number of agents")->check(CLI::PositiveNumber);
  CLI::App* gen_random = gen->add_subcommand("random", "seeded random instance");
  owen::GeneratorParams params;
  std::string kind = "maxflow";
  gen_random->add_option("--kind", kind, "maxflow, branching or bmatching")
      ->check(CLI::IsMember({"maxflow", "branching", "bmatching"}));
  gen_random->add_option("--seed", params.seed);
  gen_random->add_option("--min-vertices", params.min_vertices);
  gen_random->add_option("--max-vertices", params.max_vertices);
  gen_random->add_option("--max-edges", params.max_edges);
  gen_random->add_option("--min-value", params.min_value);
  gen_random->add_option("--max-value", params.max_value);
  gen_random->add_option("--max-b", params.max_b);
  gen_random->add_option("--max-b-sum", params.max_b_sum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  owen::Format fmt = format == "human" ? owen::Format::Human : owen::Format::Machine;
  try {
    if (gen->parsed()) {
      owen::InstanceFile f;
      if (gen_path->parsed()) {
        f = owen::path_instance(path_game, path_n);
      } else {
        params.kind = kind == "maxflow"     ? owen::GameKind::MaxFlow
                      : kind == "branching" ? owen::GameKind::Branching
                                            : owen::GameKind::BMatching;
        f = owen::to_instance_file(owen::random_instance(params));
      }
      std::cout << owen::serialize_instance(f);
      return 0;
    }
    CLI::App* chosen = nullptr;
    for (CLI::App* s : subs)
      if (s->parsed()) chosen = s;
    owen::Command command = *owen::parse_command(chosen->get_name());
    flags.method = *owen::parse_method(method);
    flags.format = fmt;
    owen::LoadedInstance inst = owen::parse_instance(instance_path);
    if (!shares.empty()) flags.shares = owen::parse_shares(shares, inst);
    owen::ResultReport r = owen::run(command, inst, flags);
    std::cout << r.render(fmt);
    return r.exit_code;
  } catch (const owen::Error& e) {
    report_error(e.kind(), e.what(), fmt);
    return 2;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what(), fmt);
    return 2;
  }
}
