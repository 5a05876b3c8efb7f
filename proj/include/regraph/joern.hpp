// Copyright 2026 The Regraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/graph_json.hpp"

// Importer for TinkerPop GraphSON exports of code property graphs. Vertices
// and edges arrive wrapped in {"@type":...,"@value":...} envelopes; edge
// direction is outV -> inV. One function is carved out per METHOD vertex by
// following AST edges; vertices unreachable from any METHOD are dropped, as
// are edge labels outside the mapping table below.

namespace regraph {

/// Exporter label -> node kind. Labels absent from this table map to UNKNOWN.
inline const std::map<std::string, NodeKind>& joern_node_label_map() {
  static const std::map<std::string, NodeKind> table = {
      {"METHOD", NodeKind::Method},
      {"BLOCK", NodeKind::Block},
      {"CALL", NodeKind::Call},
      {"IDENTIFIER", NodeKind::Identifier},
      {"FIELD_IDENTIFIER", NodeKind::Identifier},
      {"LITERAL", NodeKind::Literal},
      {"CONTROL_STRUCTURE", NodeKind::ControlStructure},
      {"RETURN", NodeKind::Return},
      {"METHOD_PARAMETER_IN", NodeKind::Param},
      {"METHOD_PARAMETER_OUT", NodeKind::Param},
      {"UNKNOWN", NodeKind::Unknown},
  };
  return table;
}

/// Exporter label -> edge type. Labels absent from this table are dropped.
inline const std::map<std::string, EdgeType>& joern_edge_label_map() {
  static const std::map<std::string, EdgeType> table = {
      {"AST", EdgeType::Ast},
      {"CFG", EdgeType::Cfg},
      {"REACHING_DEF", EdgeType::Ddg},
      {"CDG", EdgeType::Cdg},
  };
  return table;
}

/// The same mapping in the shape of the shipped data file; tests pin the
/// file against this.
inline nlohmann::ordered_json joern_mapping_json() {
  nlohmann::ordered_json j;
  j["version"] = 1;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::object();
  for (const auto& [label, kind] : joern_node_label_map())
    nodes[label] = std::string(to_string(kind));
  j["node_labels"] = std::move(nodes);
  nlohmann::ordered_json edges = nlohmann::ordered_json::object();
  for (const auto& [label, type] : joern_edge_label_map())
    edges[label] = std::string(to_string(type));
  j["edge_labels"] = std::move(edges);
  return j;
}

inline constexpr const char* kOperatorPrefix = "<operator>.";

namespace joern_detail {

inline std::string to_hex(std::int64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

/// Strips nested {"@type","@value"} envelopes.
inline const nlohmann::json& unwrap(const nlohmann::json& j) {
  const nlohmann::json* cur = &j;
  while (cur->is_object() && cur->contains("@value")) cur = &(*cur)["@value"];
  return *cur;
}

inline std::int64_t vertex_id(const nlohmann::json& idval) {
  const nlohmann::json& v = unwrap(idval);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    try {
      return std::stoll(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::MalformedFile, "vertex id is neither integer nor numeric string");
}

/// First value of a vertex property; handles both the list-of-
/// VertexProperty form and plain scalars.
inline std::optional<std::string> property(const nlohmann::json& vertex, const char* name) {
  if (!vertex.contains("properties")) return std::nullopt;
  const nlohmann::json& props = vertex["properties"];
  if (!props.is_object() || !props.contains(name)) return std::nullopt;
  const nlohmann::json* p = &props[name];
  if (p->is_array()) {
    if (p->empty()) return std::nullopt;
    p = &(*p)[0];
  }
  const nlohmann::json& inner = unwrap(*p);
  const nlohmann::json& value =
      inner.is_object() && inner.contains("value") ? unwrap(inner["value"]) : inner;
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number()) {
    std::ostringstream os;
    os << value.get<double>();
    return os.str();
  }
  return std::nullopt;
}

struct RawVertex {
  std::int64_t id = 0;
  NodeKind kind = NodeKind::Unknown;
  std::string op_token;
  std::string code;
  std::string name;     // METHOD vertices only
  std::string address;  // METHOD vertices only
};

struct RawEdge {
  std::int64_t src = 0;
  std::int64_t dst = 0;
  EdgeType type = EdgeType::Ast;
};

}  // namespace joern_detail

inline FunctionCorpus parse_joern_graphson(const std::string& text,
                                           const std::string& source_name) {
  using namespace joern_detail;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, source_name + ": " + e.what());
  }

  const nlohmann::json& graph = unwrap(doc);
  if (!graph.is_object() || !graph.contains("vertices") || !graph.contains("edges"))
    throw Error(ErrorKind::MalformedFile,
                source_name + ": expected an object with 'vertices' and 'edges'");

  std::map<std::int64_t, RawVertex> vertices;
  try {
    for (const nlohmann::json& vj : graph["vertices"]) {
      const nlohmann::json& v = unwrap(vj);
      RawVertex raw;
      raw.id = vertex_id(v.at("id"));
      std::string label = v.value("label", std::string("UNKNOWN"));
      auto it = joern_node_label_map().find(label);
      raw.kind = it == joern_node_label_map().end() ? NodeKind::Unknown : it->second;
      raw.code = property(v, "CODE").value_or("");
      std::string name = property(v, "NAME").value_or("");
      if (raw.kind == NodeKind::Call) {
        if (name.rfind(kOperatorPrefix, 0) == 0) {
          raw.kind = NodeKind::Operator;
          raw.op_token = name.substr(std::string(kOperatorPrefix).size());
        } else {
          raw.op_token = name;
        }
      }
      if (raw.kind == NodeKind::Method) {
        raw.name = name;
        raw.address = property(v, "ADDRESS").value_or("");
      }
      if (vertices.count(raw.id))
        throw Error(ErrorKind::MalformedFile,
                    source_name + ": duplicate vertex id " + std::to_string(raw.id));
      vertices.emplace(raw.id, std::move(raw));
    }

    std::vector<RawEdge> edges;
    for (const nlohmann::json& ej : graph["edges"]) {
      const nlohmann::json& e = unwrap(ej);
      std::string label = e.value("label", std::string());
      auto it = joern_edge_label_map().find(label);
      if (it == joern_edge_label_map().end()) continue;
      RawEdge raw;
      raw.src = vertex_id(e.at("outV"));
      raw.dst = vertex_id(e.at("inV"));
      raw.type = it->second;
      if (!vertices.count(raw.src))
        throw Error(ErrorKind::DanglingEdge,
                    source_name + ": edge references missing vertex id " +
                        std::to_string(raw.src));
      if (!vertices.count(raw.dst))
        throw Error(ErrorKind::DanglingEdge,
                    source_name + ": edge references missing vertex id " +
                        std::to_string(raw.dst));
      edges.push_back(raw);
    }

    // group vertices into functions by AST reachability from METHOD roots
    std::map<std::int64_t, std::vector<std::int64_t>> ast_children;
    for (const RawEdge& e : edges)
      if (e.type == EdgeType::Ast) ast_children[e.src].push_back(e.dst);

    FunctionCorpus corpus;
    for (const auto& [vid, v] : vertices) {
      if (v.kind != NodeKind::Method) continue;
      std::set<std::int64_t> members;
      std::vector<std::int64_t> stack{vid};
      while (!stack.empty()) {
        std::int64_t cur = stack.back();
        stack.pop_back();
        if (!members.insert(cur).second) continue;
        auto kids = ast_children.find(cur);
        if (kids == ast_children.end()) continue;
        for (std::int64_t k : kids->second) stack.push_back(k);
      }

      CodePropertyGraph g;
      g.function_name = v.name;
      g.address = v.address.empty() ? to_hex(vid) : v.address;
      std::map<std::int64_t, int> dense;
      for (std::int64_t m : members) {
        int idx = static_cast<int>(dense.size());
        dense.emplace(m, idx);
        const RawVertex& rv = vertices.at(m);
        g.nodes.push_back({idx, rv.kind, rv.op_token, rv.code});
      }
      for (const RawEdge& e : edges) {
        auto s = dense.find(e.src);
        auto d = dense.find(e.dst);
        if (s == dense.end() || d == dense.end()) continue;
        g.edges.push_back({s->second, d->second, e.type});
      }
      collapse_duplicate_edges(g);
      validate_graph(g);
      corpus.functions.push_back(std::move(g));
    }
    if (corpus.functions.empty())
      throw Error(ErrorKind::EmptyExport, source_name + ": no METHOD vertices found");
    return corpus;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, source_name + ": " + e.what());
  }
}

inline FunctionCorpus import_joern_graphson(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_joern_graphson(buf.str(), path.string());
}

enum class CpgFormat { GRAPH_JSON, JOERN_GRAPHSON };

inline FunctionCorpus import_cpg_export(const std::filesystem::path& path, CpgFormat format) {
  return format == CpgFormat::GRAPH_JSON ? import_graph_json(path)
                                         : import_joern_graphson(path);
}

/// Peeks at the document shape: a top-level "functions" array is the
/// canonical format, anything with vertices/edges (wrapped or not) is
/// GraphSON.
inline CpgFormat detect_cpg_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("functions")) return CpgFormat::GRAPH_JSON;
  const nlohmann::json& inner = joern_detail::unwrap(doc);
  if (inner.is_object() && inner.contains("vertices") && inner.contains("edges"))
    return CpgFormat::JOERN_GRAPHSON;
  throw Error(ErrorKind::MalformedFile,
              path.string() + ": not a recognizable CPG export format");
}

}  // namespace regraph
