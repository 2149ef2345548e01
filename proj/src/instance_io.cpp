#include "owen/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "owen/errors.hpp"

namespace owen {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char* value_key(const std::string& game) {
  if (game == "maxflow") return "capacity";
  if (game == "bmatching") return "weight";
  return "cost";
}

const json& field(const json& doc, const std::string& key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError("missing field " + where + key);
  return *it;
}

std::string string_field(const json& doc, const std::string& key,
                         const std::string& where) {
  const json& v = field(doc, key, where);
  if (!v.is_string()) throw ParseError("field " + where + key + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> name_list(const json& doc, const std::string& key) {
  const json& v = field(doc, key, "");
  if (!v.is_array()) throw ParseError("field " + key + " must be an array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string())
      throw ParseError("field " + key + "[" + std::to_string(i) + "] must be a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

Rational rational_field(const json& v, const std::string& where) {
  if (v.is_number_integer()) return parse_rational(v.dump());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ParseError&) {
      throw ParseError("field " + where + " is not an exact rational: \"" +
                       v.get<std::string>() + "\"");
    }
  }
  throw ParseError("field " + where +
                   " must be an integer or a \"p/q\" string (decimals are not exact)");
}

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

InstanceFile read_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(position(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");
  InstanceFile f;
  f.game = string_field(doc, "game", "");
  if (f.game != "maxflow" && f.game != "branching" && f.game != "mst" &&
      f.game != "bmatching")
    throw ParseError("field game must be maxflow, branching, mst or bmatching, not \"" +
                     f.game + "\"");
  if (f.game == "bmatching") {
    f.left = name_list(doc, "left");
    f.right = name_list(doc, "right");
    const json& b = field(doc, "b", "");
    if (!b.is_object()) throw ParseError("field b must map names to integers");
    for (auto& [name, v] : b.items()) {
      if (!v.is_number_integer())
        throw ParseError("field b." + name + " must be an integer");
      f.b[name] = v.get<int>();
    }
  } else {
    f.vertices = name_list(doc, "vertices");
  }
  if (f.game == "maxflow") {
    f.source = string_field(doc, "source", "");
    f.sink = string_field(doc, "sink", "");
  } else if (f.game != "bmatching") {
    f.root = string_field(doc, "root", "");
  }
  const json& edges = field(doc, "edges", "");
  if (!edges.is_array()) throw ParseError("field edges must be an array");
  const std::string key = value_key(f.game);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string where = "edges[" + std::to_string(i) + "].";
    const json& e = edges[i];
    if (!e.is_object()) throw ParseError("field " + where + " must be an object");
    InstanceEdge edge;
    edge.tail = string_field(e, "tail", where);
    edge.head = string_field(e, "head", where);
    edge.value = rational_field(field(e, key, where), where + key);
    if (e.contains("name")) edge.name = string_field(e, "name", where);
    f.edges.push_back(std::move(edge));
  }
  return f;
}

std::map<std::string, int> index_names(const std::vector<std::string>& names,
                                       const std::string& what) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!idx.emplace(names[i], static_cast<int>(i)).second)
      throw ValidationError("duplicate " + what + " name \"" + names[i] + "\"");
  return idx;
}

int lookup(const std::map<std::string, int>& idx, const std::string& name,
           const std::string& where) {
  auto it = idx.find(name);
  if (it == idx.end())
    throw ValidationError(where + " names unknown vertex \"" + name + "\"");
  return it->second;
}

std::vector<std::string> edge_agent_names(const InstanceFile& f) {
  std::vector<std::string> names;
  std::map<std::string, int> seen;
  std::set<std::string> taken;
  for (const InstanceEdge& e : f.edges)
    if (!e.name.empty() && !taken.insert(e.name).second)
      throw ValidationError("duplicate edge name \"" + e.name + "\"");
  for (const InstanceEdge& e : f.edges) {
    if (!e.name.empty()) {
      names.push_back(e.name);
      continue;
    }
    std::string base = e.tail + "->" + e.head;
    int k = ++seen[base];
    std::string name = k == 1 ? base : base + "#" + std::to_string(k);
    while (taken.count(name)) name = base + "#" + std::to_string(++seen[base]);
    taken.insert(name);
    names.push_back(name);
  }
  return names;
}

}  // namespace

LoadedInstance load_instance(const InstanceFile& f) {
  LoadedInstance out;
  out.file = f;
  if (f.game == "maxflow") {
    auto idx = index_names(f.vertices, "vertex");
    MaxFlowInstance inst{DiGraph(static_cast<int>(f.vertices.size())), {}, 0, 0};
    inst.source = lookup(idx, f.source, "source");
    inst.sink = lookup(idx, f.sink, "sink");
    if (inst.source == inst.sink) throw ValidationError("source equals sink");
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
      const InstanceEdge& e = f.edges[i];
      std::string where = "edges[" + std::to_string(i) + "]";
      if (e.value <= 0) throw ValidationError(where + " has a non-positive capacity");
      inst.graph.add_edge(lookup(idx, e.tail, where), lookup(idx, e.head, where));
      inst.capacity.push_back(e.value);
    }
    validate(inst);
    out.agent_names = edge_agent_names(f);
    out.game = std::move(inst);
  } else if (f.game == "branching" || f.game == "mst") {
    auto idx = index_names(f.vertices, "vertex");
    BranchingInstance inst{DiGraph(static_cast<int>(f.vertices.size())), {}, 0};
    inst.root = lookup(idx, f.root, "root");
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
      const InstanceEdge& e = f.edges[i];
      std::string where = "edges[" + std::to_string(i) + "]";
      if (e.value < 0) throw ValidationError(where + " has a negative cost");
      int a = lookup(idx, e.tail, where), b = lookup(idx, e.head, where);
      if (a == b) throw ValidationError(where + " is a loop");
      inst.graph.add_edge(a, b);
      inst.cost.push_back(e.value);
      if (f.game == "mst") {
        inst.graph.add_edge(b, a);
        inst.cost.push_back(e.value);
      }
    }
    validate(inst);
    for (int v : agents(inst)) out.agent_names.push_back(f.vertices[v]);
    out.game = std::move(inst);
  } else if (f.game == "bmatching") {
    std::vector<std::string> all = f.left;
    all.insert(all.end(), f.right.begin(), f.right.end());
    auto idx = index_names(all, "vertex");
    BMatchingInstance inst;
    inst.left_count = static_cast<int>(f.left.size());
    inst.right_count = static_cast<int>(f.right.size());
    for (const std::string& name : all) {
      auto it = f.b.find(name);
      if (it == f.b.end()) throw ValidationError("vertex \"" + name + "\" has no b value");
      if (it->second < 1)
        throw ValidationError("b value of \"" + name + "\" must be positive");
      inst.b.push_back(it->second);
    }
    for (const auto& [name, value] : f.b)
      if (!idx.count(name)) throw ValidationError("b names unknown vertex \"" + name + "\"");
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
      const InstanceEdge& e = f.edges[i];
      std::string where = "edges[" + std::to_string(i) + "]";
      int a = lookup(idx, e.tail, where), b = lookup(idx, e.head, where);
      if (a >= inst.left_count || b < inst.left_count)
        throw ValidationError(where + " must run from the left side to the right side");
      if (e.value <= 0) throw ValidationError(where + " has a non-positive weight");
      inst.edges.push_back({a, b - inst.left_count, e.value});
    }
    validate(inst);
    out.agent_names = all;
    out.game = std::move(inst);
  } else {
    throw ValidationError("unknown game \"" + f.game + "\"");
  }
  return out;
}

LoadedInstance parse_instance_text(const std::string& text) {
  return load_instance(read_document(text));
}

LoadedInstance parse_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

std::string serialize_instance(const InstanceFile& f) {
  ordered_json doc;
  doc["game"] = f.game;
  if (f.game == "bmatching") {
    doc["left"] = f.left;
    doc["right"] = f.right;
    ordered_json b = ordered_json::object();
    for (const std::string& name : f.left)
      if (f.b.count(name)) b[name] = f.b.at(name);
    for (const std::string& name : f.right)
      if (f.b.count(name)) b[name] = f.b.at(name);
    for (const auto& [name, value] : f.b)
      if (!b.contains(name)) b[name] = value;
    doc["b"] = b;
  } else {
    doc["vertices"] = f.vertices;
  }
  if (f.game == "maxflow") {
    doc["source"] = f.source;
    doc["sink"] = f.sink;
  } else if (f.game != "bmatching") {
    doc["root"] = f.root;
  }
  ordered_json edges = ordered_json::array();
  for (const InstanceEdge& e : f.edges) {
    ordered_json j;
    j["tail"] = e.tail;
    j["head"] = e.head;
    j[value_key(f.game)] = to_string(e.value);
    if (!e.name.empty()) j["name"] = e.name;
    edges.push_back(std::move(j));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

InstanceFile path_instance(const std::string& game, int n) {
  if (n < 1) throw ValidationError("a path needs at least one agent");
  InstanceFile f;
  f.game = game;
  if (game == "maxflow") {
    f.vertices.push_back("s");
    for (int i = 1; i < n; ++i) f.vertices.push_back("v" + std::to_string(i));
    f.vertices.push_back("t");
    f.source = "s";
    f.sink = "t";
    for (int i = 0; i < n; ++i) f.edges.push_back({f.vertices[i], f.vertices[i + 1], 1, {}});
  } else if (game == "branching" || game == "mst") {
    f.vertices.push_back("r");
    for (int i = 1; i <= n; ++i) f.vertices.push_back("v" + std::to_string(i));
    f.root = "r";
    for (int i = 1; i <= n; ++i) f.edges.push_back({f.vertices[i], f.vertices[i - 1], 1, {}});
  } else {
    throw ValidationError("path instances exist for maxflow, branching and mst");
  }
  return f;
}

InstanceFile to_instance_file(const GameInstance& game) {
  InstanceFile f;
  if (auto* m = std::get_if<MaxFlowInstance>(&game)) {
    f.game = "maxflow";
    for (int v = 0; v < m->graph.vertex_count(); ++v)
      f.vertices.push_back(v == m->source ? "s"
                           : v == m->sink ? "t"
                                          : "v" + std::to_string(v));
    f.source = f.vertices[m->source];
    f.sink = f.vertices[m->sink];
    for (const Edge& e : m->graph.edges())
      f.edges.push_back({f.vertices[e.tail], f.vertices[e.head], m->capacity[e.id], {}});
  } else if (auto* b = std::get_if<BranchingInstance>(&game)) {
    f.game = "branching";
    for (int v = 0; v < b->graph.vertex_count(); ++v)
      f.vertices.push_back(v == b->root ? "r" : "v" + std::to_string(v));
    f.root = f.vertices[b->root];
    for (const Edge& e : b->graph.edges())
      f.edges.push_back({f.vertices[e.tail], f.vertices[e.head], b->cost[e.id], {}});
  } else {
    auto& m2 = std::get<BMatchingInstance>(game);
    f.game = "bmatching";
    for (int i = 0; i < m2.left_count; ++i) f.left.push_back("u" + std::to_string(i + 1));
    for (int j = 0; j < m2.right_count; ++j) f.right.push_back("w" + std::to_string(j + 1));
    for (int i = 0; i < m2.left_count; ++i) f.b[f.left[i]] = m2.b[m2.left_agent(i)];
    for (int j = 0; j < m2.right_count; ++j) f.b[f.right[j]] = m2.b[m2.right_agent(j)];
    for (const BEdge& e : m2.edges)
      f.edges.push_back({f.left[e.left], f.right[e.right], e.weight, {}});
  }
  return f;
}

}  // namespace owen
