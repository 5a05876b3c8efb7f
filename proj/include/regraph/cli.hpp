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
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "regraph/errors.hpp"
#include "regraph/evaluate.hpp"
#include "regraph/graph_json.hpp"
#include "regraph/joern.hpp"
#include "regraph/matcher.hpp"
#include "regraph/model.hpp"
#include "regraph/pipeline.hpp"
#include "regraph/synth.hpp"
#include "regraph/train.hpp"
#include "regraph/vectorizer.hpp"

// Exit codes: 0 success, 1 domain error (message on stderr), 2 usage error.

namespace regraph {

namespace cli_detail {

struct PreprocessArgs {
  std::string root;
  std::string out_dir;
  std::string backend = "fixture";
  std::string work_dir;
  std::string lifter_cmd;
  std::string optimizer_cmd;
  std::string decompiler_cmd;
  std::string cpg_extractor_cmd;
  int timeout_secs = 300;
};

inline int run_preprocess(const PreprocessArgs& a, std::ostream& out) {
  ToolchainConfig cfg;
  cfg.backend = a.backend == "external" ? Backend::EXTERNAL : Backend::FIXTURE;
  cfg.work_dir = a.work_dir.empty() ? std::filesystem::path(a.out_dir) / "work"
                                    : std::filesystem::path(a.work_dir);
  cfg.timeout_secs = a.timeout_secs;
  cfg.lifter_cmd = a.lifter_cmd;
  cfg.optimizer_cmd = a.optimizer_cmd;
  cfg.decompiler_cmd = a.decompiler_cmd;
  cfg.cpg_extractor_cmd = a.cpg_extractor_cmd;

  std::vector<std::string> failures;
  FunctionCorpus corpus = preprocess(a.root, cfg, a.out_dir, &failures);
  serialize_corpus(corpus, std::filesystem::path(a.out_dir) / "corpus.graph.json");
  out << "preprocessed " << corpus.functions.size() << " functions";
  if (!failures.empty()) out << " (" << failures.size() << " jobs failed, see logs)";
  out << "\n";
  for (const std::string& f : failures) std::cerr << "failed: " << f << "\n";
  return 0;
}

struct VectorizeArgs {
  std::string corpus_path;
  std::string op_file;
  std::string dataset_path;
  int min_count = 1;
  int vocab_version = 1;
  std::size_t max_nodes = kDefaultMaxNodes;
  bool build_vocab = false;
};

inline int run_vectorize(const VectorizeArgs& a, std::ostream& out) {
  FunctionCorpus corpus = import_graph_json(a.corpus_path);
  OperatorVocabulary vocab;
  if (a.build_vocab) {
    vocab = build_vocabulary(corpus, a.min_count, a.vocab_version);
    save_vocabulary(vocab, a.op_file);
    out << "op_file: " << vocab.size() << " operators\n";
  } else {
    vocab = load_vocabulary(a.op_file);
  }

  std::vector<EncodedGraph> graphs;
  int skipped = 0;
  for (const CodePropertyGraph& g : corpus.functions) {
    if (is_oversized(g, a.max_nodes)) {
      ++skipped;
      continue;
    }
    EncodedGraph enc = encode(g, vocab, a.max_nodes);
    if (corpus.has_ground_truth()) {
      auto it = corpus.ground_truth.find(g.function_name);
      if (it != corpus.ground_truth.end()) enc.family_id = it->second;
    }
    graphs.push_back(std::move(enc));
  }
  write_dataset(graphs, a.dataset_path, vocab.version, vocab.size(), a.max_nodes);
  out << "dataset: " << graphs.size() << " graphs";
  if (skipped) out << " (" << skipped << " oversized skipped)";
  out << "\n";
  return 0;
}

inline int run_train(const std::string& config_path, std::ostream& out) {
  TrainConfig cfg = load_train_config(config_path);
  Dataset dataset = read_dataset(cfg.dataset_path);
  std::vector<EpochStats> stats;
  train(cfg, dataset, &stats);
  for (const EpochStats& es : stats) {
    out << "epoch " << es.epoch << "/" << cfg.epochs << " loss " << es.mean_loss
        << " pos_r " << es.mean_positive_r << " neg_r " << es.mean_negative_r << "\n";
  }
  out << "model written to " << (std::filesystem::path(cfg.output_dir) / "model.json").string()
      << "\n";
  return 0;
}

struct SynthArgs {
  int families = 10;
  int variants = 2;
  double node_del = 0.0;
  double node_ins = 0.0;
  double op_swap = 0.0;
  double edge_rewire = 0.0;
  std::uint64_t seed = 0;
  std::string out_path;
};

inline int run_synth(const SynthArgs& a, std::ostream& out) {
  Perturbation p{a.node_del, a.node_ins, a.op_swap, a.edge_rewire};
  FunctionCorpus corpus = synth_corpus(a.families, a.variants, p, a.seed);
  serialize_corpus(corpus, a.out_path);
  out << "synthesized " << corpus.functions.size() << " functions into " << a.out_path
      << "\n";
  return 0;
}

struct EvalArgs {
  std::string report_path;
  std::string truth_corpus;
  std::vector<int> topk;
  std::string model_path;
  std::string dataset_path;
  int repeat = 3;
  std::string cells_path;
  std::string json_out;
};

inline std::map<std::pair<std::string, std::string>, CellScores> load_cells(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  }
  std::map<std::pair<std::string, std::string>, CellScores> cells;
  try {
    for (const auto& [key, value] : j.items()) {
      auto sep = key.find('|');
      if (sep == std::string::npos)
        throw Error(ErrorKind::MalformedFile,
                    path.string() + ": cell key '" + key + "' is not 'row|col'");
      CellScores cs;
      cs.before = value.at("before").get<std::vector<double>>();
      cs.after = value.at("after").get<std::vector<double>>();
      cells[{key.substr(0, sep), key.substr(sep + 1)}] = std::move(cs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  }
  return cells;
}

inline int run_eval(const EvalArgs& a, std::ostream& out) {
  nlohmann::ordered_json machine;
  bool did_anything = false;

  if (!a.report_path.empty()) {
    if (a.truth_corpus.empty())
      throw Error(ErrorKind::InvalidArgument, "--report requires --truth");
    SimilarityReport report = read_report_csv(a.report_path);
    FunctionCorpus truth = import_graph_json(a.truth_corpus);
    if (!truth.has_ground_truth())
      throw Error(ErrorKind::MissingTruth,
                  a.truth_corpus + " carries no ground_truth map");
    EvalResult res;
    std::vector<int> ks = a.topk.empty() ? std::vector<int>{1} : a.topk;
    for (int k : ks) res.recall_at[k] = recall_at_k(report, truth.ground_truth, k);
    for (const auto& [k, v] : res.recall_at)
      out << "recall@" << k << " " << v << "\n";
    std::set<std::string> targets;
    for (const ReportRow& r : report.rows) targets.insert(r.target_function);
    res.num_queries = static_cast<int>(targets.size());
    machine["recall"] = eval_result_json(res);
    did_anything = true;
  }

  if (!a.model_path.empty() || !a.dataset_path.empty()) {
    if (a.model_path.empty() || a.dataset_path.empty())
      throw Error(ErrorKind::InvalidArgument, "throughput needs --model and --dataset");
    GnnModel model = load_model(a.model_path);
    Dataset ds = read_dataset(a.dataset_path);
    ThroughputResult tr = throughput(model, ds, a.repeat);
    out << "secs_per_100 " << tr.secs_per_100 << " (best of " << tr.runs.size() << " over "
        << tr.num_functions << " functions)\n";
    nlohmann::ordered_json tj;
    tj["secs_per_100"] = tr.secs_per_100;
    tj["runs"] = tr.runs;
    tj["num_functions"] = tr.num_functions;
    tj["workers"] = tr.workers;
    machine["throughput"] = std::move(tj);
    did_anything = true;
  }

  if (!a.cells_path.empty()) {
    ImprovementTable table = improvement_table(load_cells(a.cells_path));
    out << render_improvement_table(table);
    machine["improvement"] = improvement_table_json(table);
    did_anything = true;
  }

  if (!did_anything)
    throw Error(ErrorKind::InvalidArgument,
                "nothing to evaluate: pass --report/--truth, --model/--dataset, or --cells");

  if (!a.json_out.empty()) {
    std::ofstream jout(a.json_out, std::ios::binary);
    if (!jout) throw Error(ErrorKind::IoFailure, "cannot open " + a.json_out + " for writing");
    jout << machine.dump(2) << "\n";
  }
  return 0;
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
  using namespace cli_detail;

  CLI::App app{"binary-code similarity toolkit"};
  app.require_subcommand(1);

  PreprocessArgs pa;
  CLI::App* pre = app.add_subcommand("preprocess", "lift, re-optimize, decompile, extract CPGs");
  pre->add_option("--root", pa.root, "input tree: project/architecture/opt_level/binary")
      ->required();
  pre->add_option("--out-dir", pa.out_dir, "output directory for GRAPH_JSON corpora")
      ->required();
  pre->add_option("--backend", pa.backend, "fixture or external")
      ->check(CLI::IsMember({"fixture", "external"}));
  pre->add_option("--work-dir", pa.work_dir, "scratch directory (default: <out-dir>/work)");
  pre->add_option("--lifter-cmd", pa.lifter_cmd, "lifter template with {in} {out}");
  pre->add_option("--optimizer-cmd", pa.optimizer_cmd,
                  "optimizer template with {in} {out} {opt_level}");
  pre->add_option("--decompiler-cmd", pa.decompiler_cmd, "decompiler template with {in} {out}");
  pre->add_option("--cpg-extractor-cmd", pa.cpg_extractor_cmd,
                  "CPG extractor template with {in} {out}");
  pre->add_option("--timeout", pa.timeout_secs, "per-stage timeout in seconds");

  VectorizeArgs va;
  CLI::App* vec = app.add_subcommand("vectorize", "build op_file and encode a corpus");
  vec->add_option("--corpus", va.corpus_path, "GRAPH_JSON corpus")->required();
  vec->add_option("--op-file", va.op_file, "operator vocabulary path")->required();
  vec->add_option("--dataset", va.dataset_path, "output dataset (jsonl)")->required();
  vec->add_flag("--build-vocab", va.build_vocab,
                "build the op_file from the corpus instead of loading it");
  vec->add_option("--min-count", va.min_count, "vocabulary count threshold");
  vec->add_option("--vocab-version", va.vocab_version, "version stamp for a built op_file");
  vec->add_option("--max-nodes", va.max_nodes, "skip functions larger than this");

  std::string train_config;
  CLI::App* tr = app.add_subcommand("train", "train a model from a dataset");
  tr->add_option("--config", train_config, "train_config.yaml")->required();

  MatchRequest mr;
  CLI::App* ma = app.add_subcommand("match", "rank top-K similar functions");
  ma->add_option("--model", mr.model_path, "trained model file")->required();
  ma->add_option("--op-file", mr.op_file_path, "operator vocabulary")->required();
  ma->add_option("--target", mr.target_path, "target corpus (GRAPH_JSON)")->required();
  ma->add_option("--candidate", mr.candidate_path, "candidate corpus (GRAPH_JSON)")->required();
  ma->add_option("--topk", mr.k, "matches per target")->check(CLI::PositiveNumber);
  ma->add_option("--out", mr.output_path, "report path (.csv or .xlsx)")->required();
  ma->add_option("--max-nodes", mr.max_nodes, "oversized-function threshold");

  SynthArgs sa;
  CLI::App* sy = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  sy->add_option("--families", sa.families, "number of base functions")->required();
  sy->add_option("--variants", sa.variants, "variants per family")->required();
  sy->add_option("--out", sa.out_path, "output corpus path")->required();
  sy->add_option("--seed", sa.seed, "generator seed");
  sy->add_option("--node-del", sa.node_del, "node deletion rate");
  sy->add_option("--node-ins", sa.node_ins, "node insertion rate");
  sy->add_option("--op-swap", sa.op_swap, "operator swap rate");
  sy->add_option("--edge-rewire", sa.edge_rewire, "DDG/CDG rewire rate");

  EvalArgs ea;
  CLI::App* ev = app.add_subcommand("eval", "metrics: recall, throughput, improvement table");
  ev->add_option("--report", ea.report_path, "match report CSV");
  ev->add_option("--truth", ea.truth_corpus, "corpus with ground_truth for --report");
  ev->add_option("--topk", ea.topk, "recall cutoffs (repeatable)");
  ev->add_option("--model", ea.model_path, "model for throughput");
  ev->add_option("--dataset", ea.dataset_path, "dataset for throughput");
  ev->add_option("--repeat", ea.repeat, "throughput repetitions");
  ev->add_option("--cells", ea.cells_path, "before/after score cells (json)");
  ev->add_option("--json", ea.json_out, "machine-readable output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (pre->parsed()) return run_preprocess(pa, std::cout);
    if (vec->parsed()) return run_vectorize(va, std::cout);
    if (tr->parsed()) return run_train(train_config, std::cout);
    if (ma->parsed()) {
      SimilarityReport report = match(mr);
      std::cout << "wrote " << mr.output_path << " (" << report.rows.size() << " rows)\n";
      return 0;
    }
    if (sy->parsed()) return run_synth(sa, std::cout);
    if (ev->parsed()) return run_eval(ea, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace regraph
