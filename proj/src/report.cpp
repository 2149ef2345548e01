#include "owen/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "owen/errors.hpp"

namespace owen {

namespace {

using nlohmann::ordered_json;

const char* command_name(Command c) {
  switch (c) {
    case Command::Leximin: return "leximin";
    case Command::Leximax: return "leximax";
    case Command::OwenCheck: return "owen-check";
    case Command::CoreCheck: return "core-check";
    case Command::Value: return "value";
    case Command::Certify: return "certify";
  }
  return "";
}

ordered_json shares_json(const LoadedInstance& inst, const std::vector<Rational>& s) {
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < s.size(); ++i) j[inst.agent_names[i]] = to_string(s[i]);
  return j;
}

std::vector<std::string> vertex_names(const LoadedInstance& inst) {
  if (inst.file.game != "bmatching") return inst.file.vertices;
  return inst.agent_names;
}

ordered_json flow_dual_json(const LoadedInstance& inst, const FlowDual& d) {
  ordered_json j;
  auto names = vertex_names(inst);
  ordered_json pi = ordered_json::object(), len = ordered_json::object();
  for (std::size_t v = 0; v < d.potential.size(); ++v) pi[names[v]] = to_string(d.potential[v]);
  for (std::size_t e = 0; e < d.length.size(); ++e)
    len[inst.agent_names[e]] = to_string(d.length[e]);
  j["potential"] = pi;
  j["length"] = len;
  return j;
}

ordered_json split_json(const LoadedInstance& inst, const DualCutSolution& d) {
  auto names = vertex_names(inst);
  ordered_json j = ordered_json::array();
  for (const SplitEntry& s : d.split) {
    ordered_json set = ordered_json::array();
    for (VertexId v : s.set) set.push_back(names[v]);
    j.push_back({{"set", set}, {"vertex", names[s.vertex]}, {"y", to_string(s.y)}});
  }
  return j;
}

ordered_json bmatch_dual_json(const LoadedInstance& inst, const BMatchDual& d) {
  ordered_json j = ordered_json::object();
  for (std::size_t a = 0; a < d.value.size(); ++a) j[inst.agent_names[a]] = to_string(d.value[a]);
  return j;
}

struct Membership {
  bool member = false;
  std::string reason;
  ordered_json certificate;
};

Membership membership(const LoadedInstance& inst, const std::vector<Rational>& p) {
  Membership m;
  if (auto* f = std::get_if<MaxFlowInstance>(&inst.game)) {
    FlowMembership r = check_owen_membership(*f, p);
    m.member = r.member;
    m.reason = r.reason;
    if (r.certificate) m.certificate = flow_dual_json(inst, *r.certificate);
  } else if (auto* b = std::get_if<BranchingInstance>(&inst.game)) {
    BranchingMembership r = check_owen_membership(*b, p);
    m.member = r.member;
    m.reason = r.reason;
    if (r.certificate) m.certificate = split_json(inst, *r.certificate);
  } else {
    BMatchMembership r = check_owen_membership(std::get<BMatchingInstance>(inst.game), p);
    m.member = r.member;
    m.reason = r.reason;
    if (r.certificate) m.certificate = bmatch_dual_json(inst, *r.certificate);
  }
  return m;
}

void check_bound(const LoadedInstance& inst, const RunFlags& flags) {
  int k = agent_count(inst.game);
  if (k > flags.max_agents)
    throw AgentBoundExceeded(std::to_string(k) + " agents exceed the bound of " +
                             std::to_string(flags.max_agents) +
                             " (raise it with --max-agents)");
}

struct Computed {
  std::vector<Rational> shares;
  std::string method;
  ordered_json extra = ordered_json::object();
  bool agree = true;
};

Computed compute(Command command, const LoadedInstance& inst, Method method) {
  bool lexmin = command == Command::Leximin;
  const char* what = lexmin ? "leximin" : "leximax";
  Computed c;
  auto unsupported = [&](const std::string& m) {
    return UnsupportedMethod(m + " is not available for " + inst.file.game + " " + what);
  };
  auto both = [&](const char* a, std::vector<Rational> x, const char* b,
                  std::vector<Rational> y) {
    c.method = "both";
    c.agree = x == y;
    ordered_json methods;
    methods[a] = shares_json(inst, x);
    methods[b] = shares_json(inst, y);
    c.extra["methods"] = methods;
    c.extra["agree"] = c.agree;
    c.shares = std::move(x);
  };
  if (auto* f = std::get_if<MaxFlowInstance>(&inst.game)) {
    if (!lexmin) {
      if (method == Method::Combinatorial || method == Method::Both)
        throw unsupported(method == Method::Both ? "both" : "combinatorial");
      c.method = "lp";
      c.shares = leximax_owen(*f);
    } else if (method == Method::Lp) {
      c.method = "lp";
      c.shares = leximin_owen_lp(*f);
    } else {
      MaxFlowLeximin r = leximin_owen(*f);
      if (method == Method::Both) {
        both("combinatorial", r.profit, "lp", leximin_owen_lp(*f));
      } else {
        c.method = "combinatorial";
        c.shares = r.profit;
      }
      c.extra["dual"] = flow_dual_json(inst, r.dual);
    }
    return c;
  }
  if (method == Method::Combinatorial) throw unsupported("combinatorial");
  if (auto* b = std::get_if<BranchingInstance>(&inst.game)) {
    if (!lexmin) {
      if (method == Method::Both) throw unsupported("both");
      c.method = "lp";
      c.shares = leximax_owen(*b).share;
    } else if (method == Method::Both) {
      both("lp", leximin_owen(*b).share, "lp-concise", leximin_owen_concise(*b).share);
    } else {
      c.method = "lp";
      c.shares = leximin_owen(*b).share;
    }
    return c;
  }
  auto& m = std::get<BMatchingInstance>(inst.game);
  if (!lexmin) {
    if (method == Method::Both) throw unsupported("both");
    c.method = "lp";
    c.shares = leximax_owen(m);
  } else if (method == Method::Both) {
    both("lp", leximin_owen(m), "duplication", leximin_via_duplication(m).profit);
  } else {
    c.method = "lp";
    c.shares = leximin_owen(m);
  }
  return c;
}

ordered_json value_solution(const LoadedInstance& inst) {
  ordered_json j = ordered_json::object();
  if (auto* f = std::get_if<MaxFlowInstance>(&inst.game)) {
    FlowResult r = max_flow(f->graph, f->capacity, f->source, f->sink);
    ordered_json flow = ordered_json::object();
    for (std::size_t e = 0; e < r.flow.size(); ++e)
      flow[inst.agent_names[e]] = to_string(r.flow[e]);
    j["value"] = to_string(r.value);
    j["flow"] = flow;
  } else if (auto* b = std::get_if<BranchingInstance>(&inst.game)) {
    BranchingSolution s = min_cost_branching(*b);
    ordered_json edges = ordered_json::array();
    for (EdgeId e : s.branching.edges) {
      const Edge& ed = b->graph.edge(e);
      edges.push_back(inst.file.vertices[ed.tail] + "->" + inst.file.vertices[ed.head]);
    }
    j["value"] = to_string(s.branching.cost);
    j["branching"] = edges;
  } else {
    auto& m = std::get<BMatchingInstance>(inst.game);
    BMatchingSolution s = max_weight_bmatching(m);
    ordered_json matched = ordered_json::object();
    for (std::size_t e = 0; e < m.edges.size(); ++e)
      if (s.multiplicity[e] > 0)
        matched[inst.agent_names[m.left_agent(m.edges[e].left)] + "-" +
                inst.agent_names[m.right_agent(m.edges[e].right)]] = s.multiplicity[e];
    j["value"] = to_string(s.value);
    j["matching"] = matched;
  }
  return j;
}

ordered_json core_json(const LoadedInstance& inst, const CoreVerdict& v, bool& ok) {
  ordered_json j;
  if (std::holds_alternative<CoreOk>(v)) {
    ok = true;
    j["verdict"] = "ok";
    return j;
  }
  ok = false;
  const CoreViolation& w = std::get<CoreViolation>(v);
  ordered_json members = ordered_json::array();
  for (std::size_t i = 0; i < inst.agent_names.size(); ++i)
    if (w.coalition >> i & 1) members.push_back(inst.agent_names[i]);
  j["verdict"] = "violation";
  j["coalition"] = members;
  j["value"] = to_string(w.value);
  j["share"] = to_string(w.share);
  return j;
}

ShareSampler sampler_for(const LoadedInstance& inst) {
  if (auto* f = std::get_if<MaxFlowInstance>(&inst.game))
    return optimal_face_sampler(flow_dual_problem(*f));
  if (auto* b = std::get_if<BranchingInstance>(&inst.game)) return owen_set_sampler(*b);
  return optimal_face_sampler(bmatching_dual_problem(std::get<BMatchingInstance>(inst.game)));
}

const std::vector<Rational>& need_shares(const RunFlags& flags, Command c) {
  if (!flags.shares)
    throw ValidationError(std::string(command_name(c)) + " needs --shares");
  return *flags.shares;
}

void put_membership(ordered_json& j, const Membership& m) {
  j["member"] = m.member;
  if (m.member)
    j["certificate"] = m.certificate;
  else
    j["reason"] = m.reason;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::Leximin, Command::Leximax, Command::OwenCheck,
                    Command::CoreCheck, Command::Value, Command::Certify})
    if (name == command_name(c)) return c;
  return std::nullopt;
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "combinatorial") return Method::Combinatorial;
  if (name == "lp") return Method::Lp;
  if (name == "both") return Method::Both;
  if (name == "default") return Method::Default;
  return std::nullopt;
}

ResultReport run(Command command, const LoadedInstance& inst, const RunFlags& flags) {
  auto start = std::chrono::steady_clock::now();
  ResultReport r;
  r.body["command"] = command_name(command);
  r.body["game"] = inst.file.game;
  switch (command) {
    case Command::Leximin:
    case Command::Leximax: {
      Computed c = compute(command, inst, flags.method);
      r.body["method"] = c.method;
      r.body["shares"] = shares_json(inst, c.shares);
      for (auto& [k, v] : c.extra.items()) r.body[k] = v;
      r.exit_code = c.agree ? 0 : 1;
      break;
    }
    case Command::OwenCheck: {
      const auto& p = need_shares(flags, command);
      r.body["shares"] = shares_json(inst, p);
      Membership m = membership(inst, p);
      put_membership(r.body, m);
      r.exit_code = m.member ? 0 : 1;
      break;
    }
    case Command::CoreCheck: {
      const auto& p = need_shares(flags, command);
      check_bound(inst, flags);
      r.body["shares"] = shares_json(inst, p);
      bool ok = false;
      r.body["core"] = core_json(inst, verify_core(inst.game, p, flags.max_agents), ok);
      r.exit_code = ok ? 0 : 1;
      break;
    }
    case Command::Value: {
      ordered_json solution = value_solution(inst);
      for (auto& [k, v] : solution.items()) r.body[k] = v;
      break;
    }
    case Command::Certify: {
      std::vector<Rational> p;
      if (flags.shares) {
        p = *flags.shares;
      } else {
        Computed c = compute(Command::Leximin, inst,
                             flags.method == Method::Both ? Method::Default : flags.method);
        r.body["method"] = c.method;
        p = c.shares;
      }
      r.body["shares"] = shares_json(inst, p);
      Membership m = membership(inst, p);
      ordered_json owen;
      put_membership(owen, m);
      r.body["owen"] = owen;
      bool ok = m.member;
      if (agent_count(inst.game) <= flags.max_agents) {
        bool core_ok = false;
        r.body["core"] = core_json(inst, verify_core(inst.game, p, flags.max_agents), core_ok);
        ok = ok && core_ok;
      } else {
        r.body["core"] = {{"verdict", "skipped"}};
      }
      LexVerdict lex = verify_lexicographic(p.size(), p, sampler_for(inst), Direction::Leximin,
                                            flags.samples, flags.seed);
      ordered_json lj;
      lj["samples"] = flags.samples;
      lj["seed"] = flags.seed;
      if (auto* d = std::get_if<Dominated>(&lex)) {
        lj["verdict"] = "dominated";
        lj["witness"] = shares_json(inst, d->witness);
        ok = false;
      } else {
        lj["verdict"] = "ok";
      }
      r.body["leximin"] = lj;
      r.exit_code = ok ? 0 : 1;
      break;
    }
  }
  if (flags.timing) {
    auto ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    r.body["elapsed_ms"] = ms;
  }
  return r;
}

namespace {

void render_human(std::ostringstream& out, const ordered_json& j, int depth) {
  std::string pad(2 * depth, ' ');
  for (auto& [key, v] : j.items()) {
    if (v.is_object() || v.is_array()) {
      out << pad << key << ":\n";
      if (v.is_array() && !v.empty() && !v.front().is_structured()) {
        std::string line;
        for (auto& x : v) line += (line.empty() ? "" : ", ") + (x.is_string() ? x.get<std::string>() : x.dump());
        out << pad << "  " << line << "\n";
      } else {
        render_human(out, v, depth + 1);
      }
      continue;
    }
    out << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump());
    if (v.is_string()) {
      try {
        Rational q = parse_rational(v.get<std::string>());
        if (q.get_den() != 1) out << "  (~" << to_decimal(q) << ")";
      } catch (const ParseError&) {
      }
    }
    out << "\n";
  }
}

}  // namespace

std::string ResultReport::render(Format format) const {
  if (format == Format::Machine) return body.dump(2) + "\n";
  std::ostringstream out;
  render_human(out, body, 0);
  out << "(values marked ~ are decimal approximations to 6 places)\n";
  return out.str();
}

std::vector<Rational> parse_shares(const std::string& text, const LoadedInstance& inst) {
  std::map<std::string, Rational> given;
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) {
    std::ifstream in(text);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("shares file " + text + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("shares")) doc = doc["shares"];
    if (!doc.is_object()) throw ParseError("shares file must hold a name -> value object");
    for (auto& [name, v] : doc.items()) {
      if (v.is_string())
        given[name] = parse_rational(v.get<std::string>());
      else if (v.is_number_integer())
        given[name] = parse_rational(v.dump());
      else
        throw ParseError("share of \"" + name + "\" must be an integer or \"p/q\" string");
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.rfind('=');
      if (eq == std::string::npos)
        throw ParseError("share \"" + item + "\" is not of the form name=value");
      given[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    }
  }
  std::vector<Rational> out(inst.agent_names.size(), 0);
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < inst.agent_names.size(); ++i) idx[inst.agent_names[i]] = i;
  for (auto& [name, v] : given) {
    auto it = idx.find(name);
    if (it == idx.end()) throw ValidationError("shares name unknown agent \"" + name + "\"");
    out[it->second] = v;
  }
  return out;
}

}  // namespace owen
