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
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "regraph/errors.hpp"
#include "regraph/model.hpp"
#include "regraph/rng.hpp"
#include "regraph/vectorizer.hpp"

namespace regraph {

struct TrainConfig {
  std::string dataset_path;
  std::string output_dir;
  int dim = 64;
  int rounds = 3;
  int embed_dim = 32;
  int epochs = 10;
  int batch_size = 8;
  double learning_rate = 1e-3;
  double margin = 0.3;
  int negative_ratio = 4;
  std::uint64_t seed = 0;
  int max_nodes = kDefaultMaxNodes;
};

// learning_rate may be zero (a zero-rate run must leave parameters
// untouched); everything else has to be genuinely positive.
inline void validate_config(const TrainConfig& c) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "train config: " + what);
  };
  if (c.dataset_path.empty()) fail("dataset_path is empty");
  if (c.output_dir.empty()) fail("output_dir is empty");
  if (c.dim < 1) fail("dim must be positive");
  if (c.rounds < 0) fail("rounds must be non-negative");
  if (c.embed_dim < 1) fail("embed_dim must be positive");
  if (c.epochs < 1) fail("epochs must be positive");
  if (c.batch_size < 1) fail("batch_size must be positive");
  if (c.learning_rate < 0.0 || !std::isfinite(c.learning_rate))
    fail("learning_rate must be finite and non-negative");
  if (!(c.margin > 0.0 && c.margin < 1.0)) fail("margin must lie in (0, 1)");
  if (c.negative_ratio < 1) fail("negative_ratio must be positive");
  if (c.max_nodes < 1) fail("max_nodes must be positive");
}

inline TrainConfig load_train_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorKind::IoFailure, "config not found: " + path.string());
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  }
  if (!root.IsMap())
    throw Error(ErrorKind::MalformedFile, path.string() + ": top level must be a mapping");

  static const char* known[] = {"dataset_path", "output_dir",  "dim",
                                "rounds",       "embed_dim",   "epochs",
                                "batch_size",   "learning_rate", "margin",
                                "negative_ratio", "seed",      "max_nodes"};
  for (const auto& kv : root) {
    std::string key = kv.first.as<std::string>();
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known))
      throw Error(ErrorKind::MalformedFile, path.string() + ": unknown key '" + key + "'");
  }

  TrainConfig c;
  try {
    auto require = [&](const char* key) {
      if (!root[key])
        throw Error(ErrorKind::MalformedFile, path.string() + ": missing key '" +
                                                  std::string(key) + "'");
      return root[key];
    };
    c.dataset_path = require("dataset_path").as<std::string>();
    c.output_dir = require("output_dir").as<std::string>();
    c.dim = require("dim").as<int>();
    c.rounds = require("rounds").as<int>();
    c.embed_dim = require("embed_dim").as<int>();
    c.epochs = require("epochs").as<int>();
    c.batch_size = require("batch_size").as<int>();
    c.learning_rate = require("learning_rate").as<double>();
    c.margin = require("margin").as<double>();
    c.negative_ratio = require("negative_ratio").as<int>();
    c.seed = require("seed").as<std::uint64_t>();
    c.max_nodes = require("max_nodes").as<int>();
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  }
  validate_config(c);
  return c;
}

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double mean_positive_r = 0.0;
  double mean_negative_r = 0.0;
  int pairs = 0;
  int skipped = 0;
  int steps = 0;
};

namespace train_detail {

struct AdamState {
  GnnParams m;
  GnnParams v;
  long long t = 0;
};

inline void adam_step(GnnModel& model, const GnnParams& grads, AdamState& state,
                      double lr) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  ++state.t;
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));

  auto update = [&](Mat& w, const Mat& g, Mat& m, Mat& v) {
    for (std::size_t i = 0; i < w.data.size(); ++i) {
      double gi = g.data[i];
      m.data[i] = beta1 * m.data[i] + (1.0 - beta1) * gi;
      v.data[i] = beta2 * v.data[i] + (1.0 - beta2) * gi * gi;
      double mhat = m.data[i] / bc1;
      double vhat = v.data[i] / bc2;
      w.data[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  };

  update(model.p.emb, grads.emb, state.m.emb, state.v.emb);
  update(model.p.w_in, grads.w_in, state.m.w_in, state.v.w_in);
  for (int d = 0; d < kNumDirections; ++d)
    update(model.p.w_msg[d], grads.w_msg[d], state.m.w_msg[d], state.v.w_msg[d]);
  update(model.p.w_self, grads.w_self, state.m.w_self, state.v.w_self);
  update(model.p.bias, grads.bias, state.m.bias, state.v.bias);
  update(model.p.w_gate, grads.w_gate, state.m.w_gate, state.v.w_gate);
  update(model.p.w_out, grads.w_out, state.m.w_out, state.v.w_out);
}

inline void accumulate(GnnParams& into, const GnnParams& from, double scale) {
  auto add = [&](Mat& a, const Mat& b) {
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += scale * b.data[i];
  };
  add(into.emb, from.emb);
  add(into.w_in, from.w_in);
  for (int d = 0; d < kNumDirections; ++d) add(into.w_msg[d], from.w_msg[d]);
  add(into.w_self, from.w_self);
  add(into.bias, from.bias);
  add(into.w_gate, from.w_gate);
  add(into.w_out, from.w_out);
}

/// Indices of usable graphs grouped by family, family ids ascending.
struct FamilyIndex {
  std::vector<std::vector<int>> families;  // graph indices per family
  std::vector<int> all;                    // every usable graph index
};

inline FamilyIndex index_families(const Dataset& ds, int max_nodes) {
  FamilyIndex idx;
  std::map<int, std::vector<int>> by_family;
  for (int i = 0; i < static_cast<int>(ds.graphs.size()); ++i) {
    const EncodedGraph& g = ds.graphs[i];
    if (g.num_nodes > max_nodes) continue;
    idx.all.push_back(i);
    if (g.family_id) by_family[*g.family_id].push_back(i);
  }
  for (auto& [fam, members] : by_family) idx.families.push_back(std::move(members));
  return idx;
}

}  // namespace train_detail

namespace train_detail {

/// Siamese training over family-labeled graphs. Deterministic for a fixed
/// seed: single-threaded, hand-rolled sampling, canonical summation. Writes
/// `model.json` and `train_log.txt` under config.output_dir.
inline GnnModel train_impl(const TrainConfig& config, const Dataset& dataset,
                           int vocab_size, int vocab_version,
                           std::vector<EpochStats>* stats_out) {
  validate_config(config);
  if (dataset.graphs.empty()) throw Error(ErrorKind::EmptyDataset, "dataset has no graphs");

  FamilyIndex idx = index_families(dataset, config.max_nodes);
  std::vector<int> eligible;
  for (int f = 0; f < static_cast<int>(idx.families.size()); ++f)
    if (idx.families[f].size() >= 2) eligible.push_back(f);
  if (eligible.empty() || idx.families.size() < 2)
    throw Error(ErrorKind::NoPositivePairs,
                "training needs two variants of one family plus at least one other "
                "family for negatives");

  GnnModel model = init_model(config.dim, config.rounds, config.embed_dim, vocab_size,
                              vocab_version, config.seed);
  AdamState adam;
  adam.m = gnn_detail::zero_like(model);
  adam.v = gnn_detail::zero_like(model);

  std::vector<EpochStats> stats;
  stats.reserve(config.epochs);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng rng(mix_seed(config.seed, 0x7a11, static_cast<std::uint64_t>(epoch)));
    std::vector<int> order = eligible;
    rng.shuffle(order);

    EpochStats es;
    es.epoch = epoch;
    double sum_pos_r = 0.0, sum_neg_r = 0.0;
    int n_pos_r = 0, n_neg_r = 0;

    GnnParams batch_grads = gnn_detail::zero_like(model);
    int in_batch = 0;

    auto flush = [&]() {
      if (in_batch == 0) return;
      if (!batch_grads.finite())
        throw Error(ErrorKind::NonFiniteLoss,
                    "non-finite gradient in epoch " + std::to_string(epoch));
      GnnParams scaled = gnn_detail::zero_like(model);
      accumulate(scaled, batch_grads, 1.0 / static_cast<double>(in_batch));
      adam_step(model, scaled, adam, config.learning_rate);
      if (!model.p.finite())
        throw Error(ErrorKind::NonFiniteLoss,
                    "non-finite parameter after step in epoch " + std::to_string(epoch));
      batch_grads.zero();
      in_batch = 0;
      ++es.steps;
    };

    for (int f : order) {
      const std::vector<int>& members = idx.families[f];
      std::size_t ai = rng.below(members.size());
      std::size_t pi = rng.below(members.size() - 1);
      if (pi >= ai) ++pi;
      const EncodedGraph& anchor = dataset.graphs[members[ai]];
      const EncodedGraph& positive = dataset.graphs[members[pi]];

      std::vector<const EncodedGraph*> negatives;
      negatives.reserve(config.negative_ratio);
      int guard = 0;
      while (static_cast<int>(negatives.size()) < config.negative_ratio &&
             guard < 64 * config.negative_ratio) {
        ++guard;
        int cand = idx.all[rng.below(idx.all.size())];
        const EncodedGraph& g = dataset.graphs[cand];
        if (g.family_id && anchor.family_id && *g.family_id == *anchor.family_id) continue;
        negatives.push_back(&g);
      }

      LossResult r = loss_and_gradients(model, anchor, positive, negatives, config.margin);
      if (!std::isfinite(r.loss))
        throw Error(ErrorKind::NonFiniteLoss, "non-finite loss in epoch " +
                                                  std::to_string(epoch) + " for anchor " +
                                                  anchor.function_name);
      es.mean_loss += r.loss;
      es.skipped += r.skipped_pairs;
      ++es.pairs;
      if (r.r_positive) {
        sum_pos_r += *r.r_positive;
        ++n_pos_r;
      }
      for (double rn : r.r_negatives) {
        sum_neg_r += rn;
        ++n_neg_r;
      }

      accumulate(batch_grads, r.grads, 1.0);
      if (++in_batch == config.batch_size) flush();
    }
    flush();

    es.mean_loss /= static_cast<double>(std::max(es.pairs, 1));
    es.mean_positive_r = n_pos_r ? sum_pos_r / n_pos_r : 0.0;
    es.mean_negative_r = n_neg_r ? sum_neg_r / n_neg_r : 0.0;
    stats.push_back(es);
  }

  std::filesystem::create_directories(config.output_dir);
  std::filesystem::path out_dir(config.output_dir);
  save_model(model, out_dir / "model.json");

  std::ofstream log(out_dir / "train_log.txt", std::ios::binary);
  if (!log)
    throw Error(ErrorKind::IoFailure, "cannot write training log under " + config.output_dir);
  log << "families " << idx.families.size() << " eligible " << eligible.size()
      << " graphs " << idx.all.size() << "\n";
  for (const EpochStats& es : stats) {
    std::ostringstream line;
    line << "epoch " << es.epoch << "/" << config.epochs << std::fixed
         << std::setprecision(6) << " loss " << es.mean_loss << " pos_r "
         << es.mean_positive_r << " neg_r " << es.mean_negative_r << " pairs "
         << es.pairs << " skipped " << es.skipped << " steps " << es.steps;
    log << line.str() << "\n";
  }

  if (stats_out) *stats_out = std::move(stats);
  return model;
}

}  // namespace train_detail

inline GnnModel train(const TrainConfig& config, const Dataset& dataset,
                      const OperatorVocabulary& vocab,
                      std::vector<EpochStats>* stats_out = nullptr) {
  if (dataset.vocab_version != vocab.version)
    throw Error(ErrorKind::VersionMismatch,
                "dataset was encoded with vocabulary version " +
                    std::to_string(dataset.vocab_version) + ", got version " +
                    std::to_string(vocab.version));
  return train_detail::train_impl(config, dataset, static_cast<int>(vocab.size()),
                                  vocab.version, stats_out);
}

/// Overload for callers that only have the dataset; the vocabulary footprint
/// (size and version) comes from the dataset header.
inline GnnModel train(const TrainConfig& config, const Dataset& dataset,
                      std::vector<EpochStats>* stats_out = nullptr) {
  return train_detail::train_impl(config, dataset, dataset.vocab_size,
                                  dataset.vocab_version, stats_out);
}

}  // namespace regraph
