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

// Acceptance harness: one pass/fail line per release criterion, exit code is
// the number of failures. Everything runs self-contained on a single CPU.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "regraph/evaluate.hpp"
#include "regraph/matcher.hpp"
#include "regraph/model.hpp"
#include "regraph/pipeline.hpp"
#include "regraph/rng.hpp"
#include "regraph/synth.hpp"
#include "regraph/train.hpp"
#include "regraph/vectorizer.hpp"
#include "support/gradcheck.hpp"
#include "support/test_util.hpp"

namespace regraph {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double secs_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << std::fixed << v;
  return os.str();
}

// --- 1: Pearson property suite ----------------------------------------------

Outcome check_pearson() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(20260815);
  for (int i = 0; i < 1000; ++i) {
    int n = rng.range(3, 64);
    std::vector<double> x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x[j] = rng.uniform(-10.0, 10.0);
      y[j] = rng.uniform(-10.0, 10.0);
    }
    double r = pearson(x, y);
    double r_sym = pearson(y, x);
    if (std::fabs(r - r_sym) > 1e-12)
      return {false, "asymmetric at pair " + std::to_string(i)};
    if (std::fabs(r) > 1.0 + 1e-12)
      return {false, "out of range at pair " + std::to_string(i) + ": " + fmt(r, 15)};

    double a = rng.uniform(0.2, 3.0) * (rng.chance(0.5) ? -1.0 : 1.0);
    double b = rng.uniform(-5.0, 5.0);
    std::vector<double> ax(n);
    for (int j = 0; j < n; ++j) ax[j] = a * x[j] + b;
    double expected = (a > 0 ? 1.0 : -1.0) * r;
    if (std::fabs(pearson(ax, y) - expected) > 1e-9)
      return {false, "affine invariance broken at pair " + std::to_string(i)};
  }

  double hand = pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4});
  if (std::fabs(hand - 0.98198) > 1e-5)
    return {false, "hand-derived case r=" + fmt(hand, 6)};

  double elapsed = secs_since(start);
  if (elapsed >= 1.0) return {false, "took " + fmt(elapsed, 2) + "s, budget 1s"};
  return {true, "1000 pairs, hand case r=" + fmt(hand, 5)};
}

// --- 2: gradient check -------------------------------------------------------

Outcome check_gradients() {
  auto start = std::chrono::steady_clock::now();
  const int kInstances = 24;
  testutil::GradSweepStats stats;
  for (int k = 0; k < kInstances; ++k) {
    auto inst = testutil::make_grad_instance(1000 + k);
    testutil::sweep_gradients(inst, stats);
    if (stats.degenerate) return {false, "degenerate instance at seed " + std::to_string(1000 + k)};
  }
  if (stats.failed != 0)
    return {false, std::to_string(stats.failed) + " coordinates off: " + stats.first_failure};
  if (stats.checked < 10000)
    return {false, "only " + std::to_string(stats.checked) + " coordinates checked"};
  if (stats.skipped >= stats.checked / 50)
    return {false, "kink skip rate too high: " + std::to_string(stats.skipped)};
  double elapsed = secs_since(start);
  if (elapsed >= 30.0) return {false, "took " + fmt(elapsed, 1) + "s, budget 30s"};
  return {true, std::to_string(kInstances) + " instances, " + std::to_string(stats.checked) +
                    " coordinates, " + std::to_string(stats.skipped) + " kinks skipped"};
}

// --- 3: permutation invariance -----------------------------------------------

CodePropertyGraph relabel_nodes(const CodePropertyGraph& g, Rng& rng) {
  std::vector<int> order(g.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::map<int, int> remap;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    remap[g.nodes[i].id] = order[i] * 7 + 3;

  CodePropertyGraph out = g;
  for (auto& n : out.nodes) n.id = remap.at(n.id);
  for (auto& e : out.edges) {
    e.src = remap.at(e.src);
    e.dst = remap.at(e.dst);
  }
  rng.shuffle(out.nodes);
  rng.shuffle(out.edges);
  return out;
}

Outcome check_permutation_invariance() {
  Perturbation none{};
  FunctionCorpus corpus = synth_corpus(100, 1, none, 17);
  OperatorVocabulary vocab = build_vocabulary(corpus);
  GnnModel model = init_model(16, 2, 8, vocab.size(), vocab.version, 5);

  Rng rng(4242);
  FunctionCorpus relabeled;
  double worst = 0.0;
  for (const CodePropertyGraph& g : corpus.functions) {
    CodePropertyGraph shuffled = relabel_nodes(g, rng);
    relabeled.functions.push_back(shuffled);
    auto e1 = embed(model, encode(g, vocab)).vector;
    auto e2 = embed(model, encode(shuffled, vocab)).vector;
    for (std::size_t i = 0; i < e1.size(); ++i)
      worst = std::max(worst, std::fabs(e1[i] - e2[i]));
  }
  if (worst > 1e-9) return {false, "embedding drift " + fmt(worst, 12)};

  SimilarityReport a = match_corpora(model, vocab, corpus, corpus, 5);
  SimilarityReport b = match_corpora(model, vocab, relabeled, relabeled, 5);
  if (a.rows.size() != b.rows.size()) return {false, "ranking row counts differ"};
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].target_function != b.rows[i].target_function ||
        a.rows[i].rank != b.rows[i].rank ||
        a.rows[i].candidate_function != b.rows[i].candidate_function)
      return {false, "top-K ranking changed at row " + std::to_string(i)};
  }
  return {true, "100 graphs, drift " + fmt(worst, 12) + ", rankings stable"};
}

// --- 4: synthetic end-to-end -------------------------------------------------

Dataset encode_labeled(const FunctionCorpus& corpus, const OperatorVocabulary& vocab) {
  Dataset ds;
  ds.vocab_version = vocab.version;
  ds.vocab_size = vocab.size();
  for (const CodePropertyGraph& g : corpus.functions) {
    EncodedGraph enc = encode(g, vocab);
    auto it = corpus.ground_truth.find(g.function_name);
    if (it != corpus.ground_truth.end()) enc.family_id = it->second;
    ds.graphs.push_back(std::move(enc));
  }
  return ds;
}

double heldout_recall(const GnnModel& model, const OperatorVocabulary& vocab,
                      const Perturbation& rates, std::uint64_t seed) {
  FunctionCorpus held = synth_corpus(50, 2, rates, seed);
  FunctionCorpus targets, candidates;
  for (const CodePropertyGraph& g : held.functions) {
    if (g.function_name.size() >= 2 &&
        g.function_name.compare(g.function_name.size() - 2, 2, "v0") == 0)
      targets.functions.push_back(g);
    else
      candidates.functions.push_back(g);
  }
  SimilarityReport report = match_corpora(model, vocab, targets, candidates, 1);
  return recall_at_k(report, held.ground_truth, 1);
}

Outcome check_synthetic_end_to_end() {
  auto start = std::chrono::steady_clock::now();
  testutil::TempDir tmp;

  Perturbation mild{0.05, 0.0, 0.10, 0.05};
  FunctionCorpus train_corpus = synth_corpus(200, 4, mild, 1);
  OperatorVocabulary vocab = build_vocabulary(train_corpus);
  Dataset ds = encode_labeled(train_corpus, vocab);

  TrainConfig cfg;
  cfg.dataset_path = "synth";
  cfg.output_dir = (tmp / "run").string();
  cfg.dim = 48;
  cfg.rounds = 3;
  cfg.embed_dim = 24;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e-3;
  cfg.margin = 0.3;
  cfg.negative_ratio = 4;
  cfg.seed = 1;
  GnnModel model = train(cfg, ds, vocab);

  double recall_mild = heldout_recall(model, vocab, mild, 2);
  Perturbation doubled{0.10, 0.0, 0.20, 0.10};
  double recall_hard = heldout_recall(model, vocab, doubled, 2);
  double elapsed = secs_since(start);

  std::string detail = "recall@1 mild " + fmt(recall_mild, 2) + ", doubled " +
                       fmt(recall_hard, 2) + ", " + fmt(elapsed, 1) + "s";
  if (recall_mild < 0.80) return {false, detail + "; mild below 0.80"};
  if (recall_hard < 0.60) return {false, detail + "; doubled below 0.60"};
  if (recall_mild <= 0.2 || recall_hard <= 0.2)
    return {false, detail + "; not above 10x random baseline"};
  if (elapsed >= 600.0) return {false, detail + "; budget 600s"};
  return {true, detail};
}

// --- 5: throughput -----------------------------------------------------------

Outcome check_throughput() {
  Perturbation mild{0.05, 0.0, 0.10, 0.05};
  FunctionCorpus corpus = synth_corpus(100, 2, mild, 9);
  OperatorVocabulary vocab = build_vocabulary(corpus);
  Dataset ds = encode_labeled(corpus, vocab);
  for (const EncodedGraph& g : ds.graphs)
    if (g.num_nodes > 200)
      return {false, g.function_name + " has " + std::to_string(g.num_nodes) + " nodes"};

  GnnModel model = init_model(64, 3, 32, vocab.size(), vocab.version, 9);
  ThroughputResult tr = throughput(model, ds, 3);
  std::string detail = fmt(tr.secs_per_100, 3) + " secs/100 functions over " +
                       std::to_string(tr.num_functions) + " graphs, best of " +
                       std::to_string(tr.runs.size());
  if (tr.secs_per_100 > 1.0) return {false, detail + "; budget 1.0"};
  return {true, detail};
}

// --- 6: determinism ----------------------------------------------------------

Outcome check_determinism() {
  testutil::TempDir tmp;
  Perturbation mild{0.05, 0.0, 0.10, 0.05};
  FunctionCorpus corpus = synth_corpus(20, 2, mild, 11);
  OperatorVocabulary vocab = build_vocabulary(corpus);
  Dataset ds = encode_labeled(corpus, vocab);

  TrainConfig cfg;
  cfg.dataset_path = "synth";
  cfg.dim = 16;
  cfg.rounds = 2;
  cfg.embed_dim = 8;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.learning_rate = 1e-3;
  cfg.margin = 0.3;
  cfg.negative_ratio = 4;
  cfg.seed = 13;

  cfg.output_dir = (tmp / "run_a").string();
  train(cfg, ds, vocab);
  cfg.output_dir = (tmp / "run_b").string();
  train(cfg, ds, vocab);
  if (testutil::read_file(tmp / "run_a/model.json") !=
      testutil::read_file(tmp / "run_b/model.json"))
    return {false, "model files differ between identical train runs"};

  save_vocabulary(vocab, tmp / "ops.json");
  serialize_corpus(corpus, tmp / "corpus.json");
  MatchRequest req;
  req.model_path = (tmp / "run_a/model.json").string();
  req.op_file_path = (tmp / "ops.json").string();
  req.target_path = (tmp / "corpus.json").string();
  req.candidate_path = (tmp / "corpus.json").string();
  req.k = 3;
  req.output_path = (tmp / "a.csv").string();
  match(req);
  req.output_path = (tmp / "b.csv").string();
  match(req);
  if (testutil::read_file(tmp / "a.csv") != testutil::read_file(tmp / "b.csv"))
    return {false, "match reports differ between identical runs"};
  return {true, "model files and match CSVs byte-identical"};
}

// --- 7: improvement-table arithmetic ------------------------------------------

Outcome check_improvement_table() {
  struct GridRow {
    const char* env;
    double before[4];
    double after[4];
    int inc[4];
    double avg_before, avg_after;
    int avg_inc;
  };
  const char* cols[4] = {"ARM", "PowerPC", "MIPS", "X86"};
  const GridRow grid[4] = {
      {"ARM", {0.239, 0.415, 0.346, 0.386}, {0.676, 0.657, 0.672, 0.628},
       {183, 58, 94, 63}, 0.347, 0.658, 90},
      {"PowerPC", {0.233, 0.373, 0.348, 0.376}, {0.573, 0.622, 0.578, 0.555},
       {146, 67, 66, 48}, 0.333, 0.582, 75},
      {"MIPS", {0.258, 0.435, 0.532, 0.462}, {0.591, 0.601, 0.672, 0.596},
       {129, 38, 26, 29}, 0.422, 0.615, 46},
      {"X86", {0.233, 0.415, 0.347, 0.400}, {0.626, 0.641, 0.697, 0.632},
       {169, 54, 101, 58}, 0.349, 0.649, 86},
  };
  const std::map<std::string, std::tuple<double, double, int>> col_avg = {
      {"ARM", {0.241, 0.617, 157}},
      {"PowerPC", {0.410, 0.630, 54}},
      {"MIPS", {0.393, 0.655, 72}},
      {"X86", {0.406, 0.603, 49}},
  };

  std::map<std::pair<std::string, std::string>, CellScores> pairs;
  for (const GridRow& r : grid)
    for (int c = 0; c < 4; ++c) pairs[{r.env, cols[c]}] = {{r.before[c]}, {r.after[c]}};
  ImprovementTable t = improvement_table(pairs);

  auto cell_ok = [](const ImprovementCell& cell, double b, double a, int inc) {
    return round_display(cell.before, 3) == b && round_display(cell.after, 3) == a &&
           static_cast<int>(round_display(cell.inc_percent, 0)) == inc;
  };
  for (const GridRow& r : grid) {
    for (int c = 0; c < 4; ++c)
      if (!cell_ok(t.cells.at({r.env, cols[c]}), r.before[c], r.after[c], r.inc[c]))
        return {false, std::string("cell ") + r.env + "/" + cols[c] + " off"};
    if (!cell_ok(t.row_avg.at(r.env), r.avg_before, r.avg_after, r.avg_inc))
      return {false, std::string("row average ") + r.env + " off"};
  }
  for (const auto& [env, expected] : col_avg)
    if (!cell_ok(t.col_avg.at(env), std::get<0>(expected), std::get<1>(expected),
                 std::get<2>(expected)))
      return {false, "column average " + env + " off"};
  if (!cell_ok(t.global, 0.362, 0.626, 74))
    return {false, "global averages " + fmt(round_display(t.global.before, 3), 3) + "/" +
                       fmt(round_display(t.global.after, 3), 3) + "/" +
                       std::to_string(static_cast<int>(round_display(t.global.inc_percent, 0)))};
  return {true, "16 cells, 183%/146%/... and 0.362/0.626/74% all reproduce"};
}

// --- 8: fixture pipeline -------------------------------------------------------

Outcome check_fixture_pipeline() {
  testutil::TempDir tmp;
  ToolchainConfig cfg;
  cfg.backend = Backend::FIXTURE;  // no external tools by construction
  cfg.work_dir = tmp / "work";

  std::vector<std::string> failures;
  FunctionCorpus corpus;
  try {
    corpus = preprocess(testutil::fixture_dir() / "tree", cfg, tmp / "out", &failures);
    validate_corpus(corpus);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  if (!failures.empty()) return {false, std::to_string(failures.size()) + " jobs failed"};
  if (corpus.functions.size() != 6)
    return {false, "expected 6 functions, got " + std::to_string(corpus.functions.size())};

  OperatorVocabulary vocab = build_vocabulary(corpus);
  GnnModel model = init_model(16, 2, 8, vocab.size(), vocab.version, 1);
  SimilarityReport report = match_corpora(model, vocab, corpus, corpus, 1);

  std::map<std::string, int> truth;
  for (const CodePropertyGraph& g : corpus.functions)
    truth.emplace(g.function_name, static_cast<int>(truth.size()));
  double recall = recall_at_k(report, truth, 1);
  if (recall != 1.0) return {false, "self-match recall@1 " + fmt(recall, 3)};
  return {true, "6 functions, invariants hold, self-match recall@1 1.00"};
}

}  // namespace
}  // namespace regraph

int main() {
  using regraph::Outcome;
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"pearson properties", regraph::check_pearson},
      {"gradient check", regraph::check_gradients},
      {"permutation invariance", regraph::check_permutation_invariance},
      {"synthetic end-to-end", regraph::check_synthetic_end_to_end},
      {"embedding throughput", regraph::check_throughput},
      {"determinism", regraph::check_determinism},
      {"improvement-table arithmetic", regraph::check_improvement_table},
      {"fixture pipeline", regraph::check_fixture_pipeline},
  };

  int failures = 0;
  int id = 0;
  for (const Criterion& c : criteria) {
    ++id;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", id, c.name,
                elapsed, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures;
}
