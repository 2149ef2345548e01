#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "owen/verify.hpp"

namespace owen {

struct InstanceEdge {
  std::string tail;
  std::string head;
  Rational value;  // capacity, cost or weight
  std::string name;

  bool operator==(const InstanceEdge&) const = default;
};

// The document as written, before lowering.
struct InstanceFile {
  std::string game;  // maxflow, branching, mst, bmatching
  std::vector<std::string> vertices;
  std::vector<InstanceEdge> edges;
  std::string source, sink;  // maxflow
  std::string root;          // branching, mst
  std::vector<std::string> left, right;  // bmatching
  std::map<std::string, int> b;          // bmatching

  bool operator==(const InstanceFile&) const = default;
};

struct LoadedInstance {
  InstanceFile file;
  GameInstance game;
  std::vector<std::string> agent_names;
};

// Throws ParseError for malformed documents and ValidationError for
// documents that parse but describe an invalid game.
LoadedInstance parse_instance(const std::filesystem::path& path);
LoadedInstance parse_instance_text(const std::string& text);
LoadedInstance load_instance(const InstanceFile& file);

std::string serialize_instance(const InstanceFile& file);

// Unit-capacity (maxflow) or unit-cost (branching) path with n agents.
InstanceFile path_instance(const std::string& game, int n);

// Converts a generated instance into a document with synthetic names.
InstanceFile to_instance_file(const GameInstance& game);

}  // namespace owen
