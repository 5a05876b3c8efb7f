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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"

namespace regraph {

/// Node feature layout. One row per node:
///   [0..9]  node-kind one-hot
///   [10]    literal flag (1 iff kind == LITERAL)
///   [11]    ln(1 + out_degree)
///   [12]    operator vocabulary index (integer-valued; the model resolves it
///           through its embedding table, it is never fed as a real number)
inline constexpr int kFeatureDim = kNumNodeKinds + 3;  // 13
inline constexpr int kOpSlot = kFeatureDim - 1;
inline constexpr std::size_t kDefaultMaxNodes = 5000;

struct VocabEntry {
  int index = 0;       // 1..N, dense; 0 is reserved for OOV
  std::int64_t count = 0;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

/// The operator file: token -> (index, corpus count). Index 0 never appears
/// in entries; it is the OOV slot at encode time.
struct OperatorVocabulary {
  int version = 1;
  int min_count = 1;
  std::map<std::string, VocabEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }

  int index_of(const std::string& token) const {
    if (token.empty()) return 0;
    auto it = entries.find(token);
    return it == entries.end() ? 0 : it->second.index;
  }

  friend bool operator==(const OperatorVocabulary&, const OperatorVocabulary&) = default;
};

/// Counts operator tokens over a corpus and assigns dense indices by
/// (count desc, token asc), so the same corpus always yields the same file.
inline OperatorVocabulary build_vocabulary(const FunctionCorpus& corpus,
                                           int min_count = 1, int version = 1) {
  if (corpus.functions.empty())
    throw Error(ErrorKind::EmptyCorpus, "cannot build vocabulary from empty corpus");
  std::map<std::string, std::int64_t> counts;
  for (const auto& f : corpus.functions)
    for (const auto& n : f.nodes)
      if (!n.op_token.empty()) ++counts[n.op_token];

  std::vector<std::pair<std::string, std::int64_t>> order(counts.begin(), counts.end());
  std::erase_if(order, [min_count](const auto& kv) { return kv.second < min_count; });
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  OperatorVocabulary vocab;
  vocab.version = version;
  vocab.min_count = min_count;
  int next = 1;
  for (const auto& [token, count] : order) vocab.entries[token] = {next++, count};
  return vocab;
}

inline void save_vocabulary(const OperatorVocabulary& vocab, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["version"] = vocab.version;
  j["min_count"] = vocab.min_count;
  nlohmann::ordered_json ops;
  // entries iterate in token order; index/count layout is pinned
  for (const auto& [token, e] : vocab.entries)
    ops[token] = {{"index", e.index}, {"count", e.count}};
  j["operators"] = std::move(ops);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

inline OperatorVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    OperatorVocabulary vocab;
    vocab.version = j.at("version").get<int>();
    vocab.min_count = j.at("min_count").get<int>();
    for (const auto& [token, je] : j.at("operators").items())
      vocab.entries[token] = {je.at("index").get<int>(), je.at("count").get<std::int64_t>()};
    return vocab;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  }
}

struct EncodedEdge {
  int src = 0;  // dense 0-based node index
  int dst = 0;
  EdgeType type = EdgeType::Ast;

  friend bool operator==(const EncodedEdge&, const EncodedEdge&) = default;
};

struct EncodedGraph {
  std::string function_name;
  std::string address;
  Provenance provenance;
  std::optional<int> family_id;
  int num_nodes = 0;
  std::vector<double> features;  // row-major [num_nodes x kFeatureDim]
  std::vector<EncodedEdge> edges;

  double feature(int node, int col) const { return features[node * kFeatureDim + col]; }

  friend bool operator==(const EncodedGraph&, const EncodedGraph&) = default;
};

/// Encodes one graph into model-ready features. Nodes are ordered by
/// ascending original id, which makes the encoding independent of input
/// node order.
inline EncodedGraph encode(const CodePropertyGraph& g, const OperatorVocabulary& vocab,
                           std::size_t max_nodes = kDefaultMaxNodes) {
  if (is_oversized(g, max_nodes))
    throw Error(ErrorKind::Oversized,
                "function '" + g.function_name + "' has " + std::to_string(g.nodes.size()) +
                    " nodes, limit " + std::to_string(max_nodes));

  std::vector<const CpgNode*> ordered;
  ordered.reserve(g.nodes.size());
  for (const auto& n : g.nodes) ordered.push_back(&n);
  std::sort(ordered.begin(), ordered.end(),
            [](const CpgNode* a, const CpgNode* b) { return a->id < b->id; });

  std::unordered_map<std::int64_t, int> dense;
  dense.reserve(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i)
    dense[ordered[i]->id] = static_cast<int>(i);

  auto degrees = out_degrees(g);

  EncodedGraph enc;
  enc.function_name = g.function_name;
  enc.address = g.address;
  enc.provenance = g.provenance;
  enc.num_nodes = static_cast<int>(ordered.size());
  enc.features.assign(ordered.size() * kFeatureDim, 0.0);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const CpgNode& n = *ordered[i];
    double* row = enc.features.data() + i * kFeatureDim;
    row[static_cast<int>(n.kind)] = 1.0;
    row[kNumNodeKinds] = n.kind == NodeKind::Literal ? 1.0 : 0.0;
    row[kNumNodeKinds + 1] = std::log1p(static_cast<double>(degrees.at(n.id)));
    row[kOpSlot] = static_cast<double>(vocab.index_of(n.op_token));
  }
  enc.edges.reserve(g.edges.size());
  for (const auto& e : g.edges)
    enc.edges.push_back({dense.at(e.src), dense.at(e.dst), e.type});
  std::sort(enc.edges.begin(), enc.edges.end(), [](const EncodedEdge& a, const EncodedEdge& b) {
    if (a.type != b.type) return a.type < b.type;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  });
  return enc;
}

// ---- dataset (jsonl) -------------------------------------------------------
//
// Line 1 header: {"version":1,"feature_dim":13,"vocab_version":v,"vocab_size":n,"max_nodes":m}
// then one graph per line. vocab_size is carried so training can size its
// embedding table from the dataset alone.

inline constexpr int kDatasetVersion = 1;

struct Dataset {
  int feature_dim = kFeatureDim;
  int vocab_version = 1;
  int vocab_size = 0;
  std::size_t max_nodes = kDefaultMaxNodes;
  std::vector<EncodedGraph> graphs;
};

namespace detail {

inline nlohmann::ordered_json encoded_to_json(const EncodedGraph& g) {
  nlohmann::ordered_json j;
  j["name"] = g.function_name;
  j["address"] = g.address;
  j["provenance"] = {{"project", g.provenance.project},
                     {"architecture", g.provenance.architecture},
                     {"opt_level", g.provenance.opt_level}};
  if (g.family_id)
    j["family_id"] = *g.family_id;
  else
    j["family_id"] = nullptr;
  j["num_nodes"] = g.num_nodes;
  j["features"] = g.features;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges)
    edges.push_back({e.src, e.dst, std::string(to_string(e.type))});
  j["edges"] = std::move(edges);
  return j;
}

inline EncodedGraph encoded_from_json(const nlohmann::json& j) {
  EncodedGraph g;
  g.function_name = j.at("name").get<std::string>();
  g.address = j.at("address").get<std::string>();
  const auto& jp = j.at("provenance");
  g.provenance = {jp.value("project", "unknown"), jp.value("architecture", "unknown"),
                  jp.value("opt_level", "unknown")};
  if (!j.at("family_id").is_null()) g.family_id = j["family_id"].get<int>();
  g.num_nodes = j.at("num_nodes").get<int>();
  g.features = j.at("features").get<std::vector<double>>();
  if (g.features.size() != static_cast<std::size_t>(g.num_nodes) * kFeatureDim)
    throw Error(ErrorKind::MalformedLine, "feature matrix shape mismatch");
  for (const auto& je : j.at("edges")) {
    auto t = edge_type_from(je.at(2).get<std::string>());
    if (!t) throw Error(ErrorKind::MalformedLine, "unknown edge type in dataset");
    int src = je.at(0).get<int>(), dst = je.at(1).get<int>();
    if (src < 0 || src >= g.num_nodes || dst < 0 || dst >= g.num_nodes)
      throw Error(ErrorKind::MalformedLine, "edge index out of range");
    g.edges.push_back({src, dst, *t});
  }
  return g;
}

}  // namespace detail

inline void write_dataset(const std::vector<EncodedGraph>& graphs,
                          const std::filesystem::path& path, int vocab_version,
                          int vocab_size, std::size_t max_nodes = kDefaultMaxNodes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  nlohmann::ordered_json header;
  header["version"] = kDatasetVersion;
  header["feature_dim"] = kFeatureDim;
  header["vocab_version"] = vocab_version;
  header["vocab_size"] = vocab_size;
  header["max_nodes"] = max_nodes;
  out << header.dump() << "\n";
  for (const auto& g : graphs) out << detail::encoded_to_json(g).dump() << "\n";
  if (!out) throw Error(ErrorKind::IoFailure, "short write to " + path.string());
}

inline Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::MalformedFile, path.string() + ": missing dataset header");

  Dataset ds;
  try {
    auto header = nlohmann::json::parse(line);
    if (header.at("version").get<int>() != kDatasetVersion)
      throw Error(ErrorKind::VersionUnknown, path.string() + ": unsupported dataset version");
    ds.feature_dim = header.at("feature_dim").get<int>();
    if (ds.feature_dim != kFeatureDim)
      throw Error(ErrorKind::VersionMismatch,
                  path.string() + ": feature_dim " + std::to_string(ds.feature_dim) +
                      " != " + std::to_string(kFeatureDim));
    ds.vocab_version = header.at("vocab_version").get<int>();
    ds.vocab_size = header.at("vocab_size").get<int>();
    ds.max_nodes = header.at("max_nodes").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": bad header: " + e.what());
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      ds.graphs.push_back(detail::encoded_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ds;
}

/// Reads a dataset and rejects it when it was written against a different
/// vocabulary version than the one supplied.
inline std::vector<EncodedGraph> read_dataset(const std::filesystem::path& path,
                                              const OperatorVocabulary& vocab) {
  Dataset ds = read_dataset(path);
  if (ds.vocab_version != vocab.version)
    throw Error(ErrorKind::VersionMismatch,
                path.string() + ": dataset vocab version " + std::to_string(ds.vocab_version) +
                    " != supplied vocabulary version " + std::to_string(vocab.version));
  return std::move(ds.graphs);
}

}  // namespace regraph
