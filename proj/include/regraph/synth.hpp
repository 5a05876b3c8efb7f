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

#include <cstdio>
#include <string>
#include <vector>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/rng.hpp"

namespace regraph {

/// Per-variant perturbation rates, each in [0, 1].
struct Perturbation {
  double node_del_rate = 0.0;
  double node_ins_rate = 0.0;
  double op_swap_rate = 0.0;
  double edge_rewire_rate = 0.0;
};

namespace synth_detail {

inline const std::vector<std::string>& operator_pool() {
  static const std::vector<std::string> pool = {
      "add",    "sub",    "mul",    "div",    "mod",    "neg",
      "and",    "or",     "xor",    "not",    "shl",    "shr",
      "assign", "load",   "store",  "cmp_eq", "cmp_ne", "cmp_lt",
      "cmp_gt", "cmp_le", "cmp_ge", "cast",   "index",  "deref",
  };
  return pool;
}

inline const std::vector<std::string>& callee_pool() {
  static const std::vector<std::string> pool = {
      "memcpy", "memset", "malloc", "free",   "strlen", "strcmp",
      "printf", "sprintf", "abs",   "clamp",  "min",    "max",
      "floor",  "ceil",   "sqrt",   "checksum",
  };
  return pool;
}

inline bool statement_like(NodeKind k) {
  return k == NodeKind::Block || k == NodeKind::Call || k == NodeKind::Operator ||
         k == NodeKind::ControlStructure || k == NodeKind::Return;
}

inline NodeKind draw_kind(Rng& rng) {
  // weights out of 100
  int r = static_cast<int>(rng.below(100));
  if (r < 25) return NodeKind::Identifier;
  if (r < 50) return NodeKind::Operator;
  if (r < 65) return NodeKind::Call;
  if (r < 80) return NodeKind::Literal;
  if (r < 88) return NodeKind::Block;
  if (r < 95) return NodeKind::ControlStructure;
  if (r < 98) return NodeKind::Return;
  return NodeKind::Param;
}

inline std::string draw_token(Rng& rng, NodeKind kind) {
  if (kind == NodeKind::Operator) return rng.pick(operator_pool());
  if (kind == NodeKind::Call) return rng.pick(callee_pool());
  return "";
}

inline CodePropertyGraph make_base(Rng& rng) {
  CodePropertyGraph g;
  int n = rng.range(14, 34);
  g.nodes.push_back({0, NodeKind::Method, "", "method"});
  g.nodes.push_back({1, NodeKind::Block, "", "body"});
  g.edges.push_back({0, 1, EdgeType::Ast});
  for (int i = 2; i < n; ++i) {
    NodeKind kind = draw_kind(rng);
    std::string tok = draw_token(rng, kind);
    g.nodes.push_back({i, kind, tok, tok.empty() ? std::string(to_string(kind)) : tok});
    std::int64_t parent = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(i)));
    g.edges.push_back({parent, i, EdgeType::Ast});
  }

  // CFG: chain the statement-like nodes in id order, headed by the METHOD
  // node, with an occasional back edge to model loops.
  std::vector<std::int64_t> chain = {0};
  for (const auto& node : g.nodes)
    if (node.id != 0 && statement_like(node.kind)) chain.push_back(node.id);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    g.edges.push_back({chain[i], chain[i + 1], EdgeType::Cfg});
  if (chain.size() > 4 && rng.chance(0.5)) {
    std::size_t to = 1 + rng.below(chain.size() / 2);
    g.edges.push_back({chain.back(), chain[to], EdgeType::Cfg});
  }

  int n_ddg = n / 3;
  for (int i = 0; i < n_ddg; ++i) {
    auto src = static_cast<std::int64_t>(rng.below(n));
    auto dst = static_cast<std::int64_t>(rng.below(n));
    if (src != dst) g.edges.push_back({src, dst, EdgeType::Ddg});
  }
  for (const auto& node : g.nodes) {
    if (node.kind != NodeKind::ControlStructure) continue;
    int fanout = rng.range(1, 3);
    for (int i = 0; i < fanout; ++i) {
      auto dst = static_cast<std::int64_t>(rng.below(n));
      if (dst != node.id) g.edges.push_back({node.id, dst, EdgeType::Cdg});
    }
  }
  collapse_duplicate_edges(g);
  return g;
}

inline void perturb(CodePropertyGraph& g, const Perturbation& p, Rng& rng) {
  // Deletion: splice AST children onto the deleted node's parent, reconnect
  // CFG predecessors to successors, drop incident DDG/CDG edges.
  if (p.node_del_rate > 0) {
    std::vector<std::int64_t> doomed;
    for (const auto& node : g.nodes)
      if (node.kind != NodeKind::Method && rng.chance(p.node_del_rate))
        doomed.push_back(node.id);
    for (std::int64_t victim : doomed) {
      std::int64_t ast_parent = -1;
      std::vector<std::int64_t> cfg_preds, cfg_succs;
      for (const auto& e : g.edges) {
        if (e.type == EdgeType::Ast && e.dst == victim) ast_parent = e.src;
        if (e.type == EdgeType::Cfg && e.dst == victim) cfg_preds.push_back(e.src);
        if (e.type == EdgeType::Cfg && e.src == victim) cfg_succs.push_back(e.dst);
      }
      std::vector<CpgEdge> kept;
      kept.reserve(g.edges.size());
      for (auto e : g.edges) {
        if (e.src == victim && e.type == EdgeType::Ast && ast_parent >= 0) {
          e.src = ast_parent;  // re-parent AST children
          if (e.src != e.dst) kept.push_back(e);
          continue;
        }
        if (e.src == victim || e.dst == victim) continue;
        kept.push_back(e);
      }
      for (auto pred : cfg_preds)
        for (auto succ : cfg_succs)
          if (pred != succ) kept.push_back({pred, succ, EdgeType::Cfg});
      g.edges = std::move(kept);
      std::erase_if(g.nodes, [victim](const CpgNode& n) { return n.id == victim; });
    }
  }

  if (p.node_ins_rate > 0) {
    std::int64_t next_id = 0;
    for (const auto& node : g.nodes) next_id = std::max(next_id, node.id + 1);
    std::vector<std::int64_t> hosts;
    for (const auto& node : g.nodes)
      if (rng.chance(p.node_ins_rate)) hosts.push_back(node.id);
    for (std::int64_t host : hosts) {
      NodeKind kind = draw_kind(rng);
      std::string tok = draw_token(rng, kind);
      g.nodes.push_back({next_id, kind, tok, tok.empty() ? std::string(to_string(kind)) : tok});
      g.edges.push_back({host, next_id, EdgeType::Ast});
      if (statement_like(kind)) g.edges.push_back({host, next_id, EdgeType::Cfg});
      ++next_id;
    }
  }

  if (p.op_swap_rate > 0) {
    for (auto& node : g.nodes) {
      if (node.op_token.empty() || !rng.chance(p.op_swap_rate)) continue;
      const auto& pool =
          node.kind == NodeKind::Call ? callee_pool() : operator_pool();
      node.op_token = rng.pick(pool);
      node.code = node.op_token;
    }
  }

  // Rewiring only touches DDG/CDG so the AST forest and CFG chain survive.
  if (p.edge_rewire_rate > 0 && g.nodes.size() > 1) {
    for (auto& e : g.edges) {
      if (e.type != EdgeType::Ddg && e.type != EdgeType::Cdg) continue;
      if (!rng.chance(p.edge_rewire_rate)) continue;
      const auto& candidate = g.nodes[rng.below(g.nodes.size())];
      if (candidate.id != e.src) e.dst = candidate.id;
    }
  }
  collapse_duplicate_edges(g);
}

}  // namespace synth_detail

/// Generates `families` random base functions and `variants_per_family`
/// perturbed copies of each. Ground truth maps every variant to its family.
/// Bit-deterministic for a given seed.
inline FunctionCorpus synth_corpus(int families, int variants_per_family,
                                   const Perturbation& p, std::uint64_t seed) {
  auto check_rate = [](double r, const char* name) {
    if (r < 0.0 || r > 1.0)
      throw Error(ErrorKind::InvalidArgument, std::string(name) + " outside [0,1]");
  };
  if (families < 1) throw Error(ErrorKind::InvalidArgument, "families must be >= 1");
  if (variants_per_family < 1)
    throw Error(ErrorKind::InvalidArgument, "variants_per_family must be >= 1");
  check_rate(p.node_del_rate, "node_del_rate");
  check_rate(p.node_ins_rate, "node_ins_rate");
  check_rate(p.op_swap_rate, "op_swap_rate");
  check_rate(p.edge_rewire_rate, "edge_rewire_rate");

  FunctionCorpus corpus;
  char buf[64];
  for (int fam = 0; fam < families; ++fam) {
    Rng base_rng(mix_seed(seed, static_cast<std::uint64_t>(fam), 0xba5eull));
    CodePropertyGraph base = synth_detail::make_base(base_rng);
    for (int var = 0; var < variants_per_family; ++var) {
      CodePropertyGraph g = base;
      Rng var_rng(mix_seed(seed, static_cast<std::uint64_t>(fam),
                           0x1000ull + static_cast<std::uint64_t>(var)));
      synth_detail::perturb(g, p, var_rng);
      std::snprintf(buf, sizeof buf, "fam%04d_v%d", fam, var);
      g.function_name = buf;
      std::snprintf(buf, sizeof buf, "%x", fam * 0x40 + var + 0x100);
      g.address = buf;
      g.provenance = {"synth", "virt", "O0"};
      corpus.ground_truth[g.function_name] = fam;
      corpus.functions.push_back(std::move(g));
    }
  }
  return corpus;
}

}  // namespace regraph
