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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"

// Canonical on-disk corpus format ("graph json"), UTF-8:
//
//   {"version":1,
//    "functions":[{"name":str,"address":str,
//                  "provenance":{"project":str,"architecture":str,"opt_level":str},
//                  "nodes":[{"id":int,"kind":str,"op":str,"code":str}],
//                  "edges":[{"src":int,"dst":int,"type":"AST"|"CFG"|"DDG"|"CDG"}]}],
//    "ground_truth":{str:int}}    // optional, present for labeled corpora
//
// Field names are bit-exact. Serialization is byte-deterministic for equal
// corpora: key order is fixed and numbers round-trip exactly.

namespace regraph {

inline constexpr int kGraphJsonVersion = 1;

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson graph_to_json(const CodePropertyGraph& g) {
  ojson jf;
  jf["name"] = g.function_name;
  jf["address"] = g.address;
  jf["provenance"] = {{"project", g.provenance.project},
                      {"architecture", g.provenance.architecture},
                      {"opt_level", g.provenance.opt_level}};
  ojson nodes = ojson::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"id", n.id},
                     {"kind", std::string(to_string(n.kind))},
                     {"op", n.op_token},
                     {"code", n.code}});
  }
  jf["nodes"] = std::move(nodes);
  ojson edges = ojson::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"type", std::string(to_string(e.type))}});
  }
  jf["edges"] = std::move(edges);
  return jf;
}

}  // namespace detail

inline std::string corpus_to_json_string(const FunctionCorpus& corpus) {
  detail::ojson j;
  j["version"] = kGraphJsonVersion;
  detail::ojson fns = detail::ojson::array();
  for (const auto& f : corpus.functions) fns.push_back(detail::graph_to_json(f));
  j["functions"] = std::move(fns);
  if (corpus.has_ground_truth()) {
    detail::ojson gt;
    for (const auto& [name, fam] : corpus.ground_truth) gt[name] = fam;
    j["ground_truth"] = std::move(gt);
  }
  return j.dump(2) + "\n";
}

inline void serialize_corpus(const FunctionCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << corpus_to_json_string(corpus);
  if (!out) throw Error(ErrorKind::IoFailure, "short write to " + path.string());
}

/// Parses the canonical format from an in-memory string. Unrecognized node
/// kinds map to UNKNOWN; duplicate edges collapse; all graph invariants are
/// established (or the import fails).
inline FunctionCorpus parse_graph_json(const std::string& text, const std::string& origin = "<memory>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, origin + ": " + e.what());
  }

  FunctionCorpus corpus;
  try {
    if (!j.is_object() || !j.contains("version") || !j.contains("functions"))
      throw Error(ErrorKind::MalformedFile, origin + ": not a graph json document");
    if (j["version"].get<int>() != kGraphJsonVersion)
      throw Error(ErrorKind::VersionUnknown,
                  origin + ": unsupported version " + j["version"].dump());

    for (const auto& jf : j["functions"]) {
      CodePropertyGraph g;
      g.function_name = jf.at("name").get<std::string>();
      g.address = jf.at("address").get<std::string>();
      if (jf.contains("provenance")) {
        const auto& jp = jf["provenance"];
        g.provenance.project = jp.value("project", "unknown");
        g.provenance.architecture = jp.value("architecture", "unknown");
        g.provenance.opt_level = jp.value("opt_level", "unknown");
      }
      for (const auto& jn : jf.at("nodes")) {
        CpgNode n;
        n.id = jn.at("id").get<std::int64_t>();
        auto kind = node_kind_from(jn.at("kind").get<std::string>());
        n.kind = kind.value_or(NodeKind::Unknown);
        n.op_token = jn.value("op", "");
        n.code = jn.value("code", "");
        g.nodes.push_back(std::move(n));
      }
      for (const auto& je : jf.at("edges")) {
        CpgEdge e;
        e.src = je.at("src").get<std::int64_t>();
        e.dst = je.at("dst").get<std::int64_t>();
        auto t = edge_type_from(je.at("type").get<std::string>());
        if (!t)
          throw Error(ErrorKind::MalformedFile,
                      origin + ": unknown edge type " + je.at("type").dump());
        e.type = *t;
        g.edges.push_back(e);
      }
      collapse_duplicate_edges(g);
      validate_graph(g);
      corpus.functions.push_back(std::move(g));
    }
    if (j.contains("ground_truth")) {
      for (const auto& [name, fam] : j["ground_truth"].items())
        corpus.ground_truth[name] = fam.get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, origin + ": " + e.what());
  }

  if (corpus.functions.empty())
    throw Error(ErrorKind::EmptyExport, origin + ": export contains zero functions");
  validate_corpus(corpus);
  return corpus;
}

inline FunctionCorpus import_graph_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph_json(ss.str(), path.string());
}

}  // namespace regraph
