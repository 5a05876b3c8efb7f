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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "regraph/errors.hpp"

namespace regraph {

/// Coarse syntactic role of a node. External exporters emit dozens of
/// fine-grained kinds; anything unrecognized maps to Unknown.
enum class NodeKind {
  Method,
  Block,
  Call,
  Identifier,
  Literal,
  Operator,
  ControlStructure,
  Return,
  Param,
  Unknown,
};

inline constexpr int kNumNodeKinds = 10;

enum class EdgeType { Ast, Cfg, Ddg, Cdg };

inline constexpr int kNumEdgeTypes = 4;

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Method: return "METHOD";
    case NodeKind::Block: return "BLOCK";
    case NodeKind::Call: return "CALL";
    case NodeKind::Identifier: return "IDENTIFIER";
    case NodeKind::Literal: return "LITERAL";
    case NodeKind::Operator: return "OPERATOR";
    case NodeKind::ControlStructure: return "CONTROL_STRUCTURE";
    case NodeKind::Return: return "RETURN";
    case NodeKind::Param: return "PARAM";
    case NodeKind::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

inline std::optional<NodeKind> node_kind_from(std::string_view s) {
  for (int i = 0; i < kNumNodeKinds; ++i) {
    auto k = static_cast<NodeKind>(i);
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

inline std::string_view to_string(EdgeType t) {
  switch (t) {
    case EdgeType::Ast: return "AST";
    case EdgeType::Cfg: return "CFG";
    case EdgeType::Ddg: return "DDG";
    case EdgeType::Cdg: return "CDG";
  }
  return "AST";
}

inline std::optional<EdgeType> edge_type_from(std::string_view s) {
  for (int i = 0; i < kNumEdgeTypes; ++i) {
    auto t = static_cast<EdgeType>(i);
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

struct CpgNode {
  std::int64_t id = 0;
  NodeKind kind = NodeKind::Unknown;
  std::string op_token;  // operator/callee token, empty if none
  std::string code;      // source snippet, informational only

  friend bool operator==(const CpgNode&, const CpgNode&) = default;
};

struct CpgEdge {
  std::int64_t src = 0;
  std::int64_t dst = 0;
  EdgeType type = EdgeType::Ast;

  friend bool operator==(const CpgEdge&, const CpgEdge&) = default;
  friend auto operator<=>(const CpgEdge&, const CpgEdge&) = default;
};

/// Where a function came from; any field may be "unknown".
struct Provenance {
  std::string project = "unknown";
  std::string architecture = "unknown";
  std::string opt_level = "unknown";

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// A single function as a typed multigraph. Immutable by convention once
/// built; all mutation happens during construction/import.
struct CodePropertyGraph {
  std::string function_name;
  std::string address;  // hex string, e.g. "154"; never used arithmetically
  Provenance provenance;
  std::vector<CpgNode> nodes;
  std::vector<CpgEdge> edges;
};

struct FunctionCorpus {
  std::vector<CodePropertyGraph> functions;
  // function name -> family id; empty map means no ground truth.
  std::map<std::string, int> ground_truth;

  bool has_ground_truth() const { return !ground_truth.empty(); }
};

/// Out-degree per node id over all edge types (the node's derived
/// out_degree_cache).
inline std::unordered_map<std::int64_t, int> out_degrees(const CodePropertyGraph& g) {
  std::unordered_map<std::int64_t, int> deg;
  deg.reserve(g.nodes.size());
  for (const auto& n : g.nodes) deg[n.id] = 0;
  for (const auto& e : g.edges) {
    auto it = deg.find(e.src);
    if (it != deg.end()) ++it->second;
  }
  return deg;
}

inline bool is_oversized(const CodePropertyGraph& g, std::size_t max_nodes) {
  return g.nodes.size() > max_nodes;
}

/// Drops duplicate (src, dst, type) triples, keeping first occurrence.
inline void collapse_duplicate_edges(CodePropertyGraph& g) {
  std::vector<CpgEdge> out;
  out.reserve(g.edges.size());
  std::set<CpgEdge> seen;
  for (const auto& e : g.edges)
    if (seen.insert(e).second) out.push_back(e);
  g.edges = std::move(out);
}

/// Checks every CodePropertyGraph invariant: unique node ids, valid edge
/// endpoints, at least one METHOD node, and AST edges forming a forest whose
/// roots are METHOD nodes. Throws Error on the first violation.
inline void validate_graph(const CodePropertyGraph& g) {
  if (g.nodes.empty())
    throw Error(ErrorKind::MalformedFile,
                "function '" + g.function_name + "' has no nodes");

  std::unordered_map<std::int64_t, const CpgNode*> by_id;
  by_id.reserve(g.nodes.size());
  bool has_method = false;
  for (const auto& n : g.nodes) {
    if (n.id < 0)
      throw Error(ErrorKind::MalformedFile, "negative node id " + std::to_string(n.id));
    if (!by_id.emplace(n.id, &n).second)
      throw Error(ErrorKind::MalformedFile, "duplicate node id " + std::to_string(n.id));
    if (n.kind == NodeKind::Method) has_method = true;
  }
  if (!has_method)
    throw Error(ErrorKind::MalformedFile,
                "function '" + g.function_name + "' has no METHOD node");

  std::unordered_map<std::int64_t, std::int64_t> ast_parent;
  for (const auto& e : g.edges) {
    if (!by_id.count(e.src))
      throw Error(ErrorKind::DanglingEdge,
                  "edge references missing node " + std::to_string(e.src));
    if (!by_id.count(e.dst))
      throw Error(ErrorKind::DanglingEdge,
                  "edge references missing node " + std::to_string(e.dst));
    if (e.type == EdgeType::Ast) {
      auto [it, inserted] = ast_parent.emplace(e.dst, e.src);
      if (!inserted && it->second != e.src)
        throw Error(ErrorKind::MalformedFile,
                    "node " + std::to_string(e.dst) + " has two AST parents");
    }
  }

  // Walk each node up its AST parent chain: no cycles, and the chain must
  // terminate at a METHOD node whenever the node touches the AST at all.
  std::unordered_set<std::int64_t> in_ast;
  for (const auto& [child, parent] : ast_parent) {
    in_ast.insert(child);
    in_ast.insert(parent);
  }
  for (std::int64_t start : in_ast) {
    std::int64_t cur = start;
    std::size_t steps = 0;
    while (true) {
      auto it = ast_parent.find(cur);
      if (it == ast_parent.end()) break;
      cur = it->second;
      if (++steps > g.nodes.size())
        throw Error(ErrorKind::MalformedFile, "AST cycle through node " + std::to_string(start));
    }
    if (by_id.at(cur)->kind != NodeKind::Method)
      throw Error(ErrorKind::MalformedFile,
                  "AST tree rooted at non-METHOD node " + std::to_string(cur));
  }
}

inline void validate_corpus(const FunctionCorpus& c) {
  for (const auto& f : c.functions) validate_graph(f);
  if (c.has_ground_truth()) {
    for (const auto& f : c.functions) {
      if (!c.ground_truth.count(f.function_name))
        throw Error(ErrorKind::MalformedFile,
                    "ground truth missing function '" + f.function_name + "'");
    }
  }
}

/// Equality up to node/edge ordering.
inline bool structurally_equal(const CodePropertyGraph& a, const CodePropertyGraph& b) {
  if (a.function_name != b.function_name || a.address != b.address ||
      !(a.provenance == b.provenance) || a.nodes.size() != b.nodes.size() ||
      a.edges.size() != b.edges.size())
    return false;
  auto an = a.nodes, bn = b.nodes;
  auto by_id = [](const CpgNode& x, const CpgNode& y) { return x.id < y.id; };
  std::sort(an.begin(), an.end(), by_id);
  std::sort(bn.begin(), bn.end(), by_id);
  if (an != bn) return false;
  auto ae = a.edges, be = b.edges;
  std::sort(ae.begin(), ae.end());
  std::sort(be.begin(), be.end());
  return ae == be;
}

inline bool structurally_equal(const FunctionCorpus& a, const FunctionCorpus& b) {
  if (a.functions.size() != b.functions.size()) return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    if (!structurally_equal(a.functions[i], b.functions[i])) return false;
  return a.ground_truth == b.ground_truth;
}

}  // namespace regraph
