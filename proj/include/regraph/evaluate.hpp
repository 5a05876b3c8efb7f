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
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/matcher.hpp"
#include "regraph/model.hpp"
#include "regraph/vectorizer.hpp"

namespace regraph {

// ---- recall ----------------------------------------------------------------

/// Fraction of targets whose true counterpart (same family) appears within
/// ranks 1..k. Targets missing from the truth map are an error; candidates
/// missing from it simply never count as correct.
inline double recall_at_k(const SimilarityReport& report,
                          const std::map<std::string, int>& truth, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  std::vector<std::string> order;
  std::map<std::string, bool> hit;
  for (const ReportRow& row : report.rows) {
    auto it = hit.find(row.target_function);
    if (it == hit.end()) {
      order.push_back(row.target_function);
      it = hit.emplace(row.target_function, false).first;
    }
    if (row.rank > k || it->second) continue;
    auto t = truth.find(row.target_function);
    if (t == truth.end())
      throw Error(ErrorKind::MissingTruth,
                  "no ground truth for target " + row.target_function);
    auto c = truth.find(row.candidate_function);
    if (c != truth.end() && c->second == t->second) it->second = true;
  }
  if (order.empty()) throw Error(ErrorKind::MissingTruth, "report has no rows");
  int correct = 0;
  for (const std::string& name : order)
    if (hit[name]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(order.size());
}

// ---- throughput ------------------------------------------------------------

struct ThroughputResult {
  double secs_per_100 = 0.0;          // best run
  std::vector<double> runs;           // secs_per_100 of every run
  int num_functions = 0;
  int workers = 1;
};

/// Wall-clock embedding time, best of `repeat` full passes, normalized to 100
/// functions. The timed region covers only embed calls: no dataset loading,
/// no adjacency-free work outside the loop.
inline ThroughputResult throughput(const GnnModel& model, const Dataset& dataset,
                                   int repeat = 3) {
  if (dataset.graphs.empty())
    throw Error(ErrorKind::EmptyDataset, "cannot measure throughput without graphs");
  if (repeat < 1) throw Error(ErrorKind::InvalidArgument, "repeat must be at least 1");

  ThroughputResult result;
  result.num_functions = static_cast<int>(dataset.graphs.size());
  for (int r = 0; r < repeat; ++r) {
    auto start = std::chrono::steady_clock::now();
    for (const EncodedGraph& g : dataset.graphs) {
      FunctionEmbedding e = embed(model, g);
      if (e.vector.empty())
        throw Error(ErrorKind::DimensionMismatch, "empty embedding for " + g.function_name);
    }
    auto stop = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(stop - start).count();
    result.runs.push_back(secs * 100.0 / static_cast<double>(dataset.graphs.size()));
  }
  result.secs_per_100 = *std::min_element(result.runs.begin(), result.runs.end());
  return result;
}

struct EvalResult {
  std::map<int, double> recall_at;
  double secs_per_100 = 0.0;
  int num_queries = 0;
  int num_candidates = 0;
  int workers = 1;
};

// ---- improvement table -----------------------------------------------------

struct CellScores {
  std::vector<double> before;
  std::vector<double> after;
};

struct ImprovementCell {
  double before = 0.0;
  double after = 0.0;
  double inc_percent = 0.0;  // unrounded; rendering rounds for display
};

/// Before/after score grid in the layout of a source-env x target-env matrix.
/// The three averaging rules are deliberately asymmetric, mirroring how such
/// tables are conventionally assembled:
///   - cell inc        = (after - before) / before * 100 on the cell means
///   - row average inc = ratio of the row's mean after to mean before
///   - col average inc = arithmetic mean of the column's cell incs
///   - global inc      = arithmetic mean of the row-average incs
struct ImprovementTable {
  std::vector<std::string> row_envs;
  std::vector<std::string> col_envs;
  std::map<std::pair<std::string, std::string>, ImprovementCell> cells;
  std::map<std::string, ImprovementCell> row_avg;
  std::map<std::string, ImprovementCell> col_avg;
  ImprovementCell global;
};

namespace eval_detail {

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double inc_of(double before, double after) {
  return before > 0.0 ? (after - before) / before * 100.0 : 0.0;
}

}  // namespace eval_detail

/// Rounds half away from zero at `decimals` places, with a relative epsilon
/// so means of published 3-decimal scores that land a few ulps under an exact
/// tie still round the way the printed table does.
inline double round_display(double x, int decimals) {
  double scale = std::pow(10.0, decimals);
  double y = x * scale;
  double eps = 1e-9 * std::max(1.0, std::fabs(y));
  double r = y >= 0.0 ? std::floor(y + 0.5 + eps) : std::ceil(y - 0.5 - eps);
  return r / scale;
}

inline ImprovementTable improvement_table(
    const std::map<std::pair<std::string, std::string>, CellScores>& pairs) {
  using eval_detail::inc_of;
  using eval_detail::mean;
  if (pairs.empty()) throw Error(ErrorKind::EmptyCell, "improvement table has no cells");

  ImprovementTable t;
  std::set<std::string> rows, cols;
  for (const auto& [key, scores] : pairs) {
    if (scores.before.empty() || scores.after.empty())
      throw Error(ErrorKind::EmptyCell,
                  "cell (" + key.first + ", " + key.second + ") has an empty score list");
    ImprovementCell cell;
    cell.before = mean(scores.before);
    cell.after = mean(scores.after);
    cell.inc_percent = inc_of(cell.before, cell.after);
    t.cells[key] = cell;
    rows.insert(key.first);
    cols.insert(key.second);
  }
  t.row_envs.assign(rows.begin(), rows.end());
  t.col_envs.assign(cols.begin(), cols.end());

  for (const std::string& r : t.row_envs) {
    std::vector<double> befores, afters;
    for (const auto& [key, cell] : t.cells) {
      if (key.first != r) continue;
      befores.push_back(cell.before);
      afters.push_back(cell.after);
    }
    ImprovementCell avg;
    avg.before = mean(befores);
    avg.after = mean(afters);
    avg.inc_percent = inc_of(avg.before, avg.after);
    t.row_avg[r] = avg;
  }

  for (const std::string& c : t.col_envs) {
    std::vector<double> befores, afters, incs;
    for (const auto& [key, cell] : t.cells) {
      if (key.second != c) continue;
      befores.push_back(cell.before);
      afters.push_back(cell.after);
      incs.push_back(cell.inc_percent);
    }
    ImprovementCell avg;
    avg.before = mean(befores);
    avg.after = mean(afters);
    avg.inc_percent = mean(incs);
    t.col_avg[c] = avg;
  }

  std::vector<double> all_before, all_after, row_incs;
  for (const auto& [key, cell] : t.cells) {
    all_before.push_back(cell.before);
    all_after.push_back(cell.after);
  }
  for (const std::string& r : t.row_envs) row_incs.push_back(t.row_avg[r].inc_percent);
  t.global.before = mean(all_before);
  t.global.after = mean(all_after);
  t.global.inc_percent = mean(row_incs);
  return t;
}

// ---- structural scorer -----------------------------------------------------
//
// Desk-scale stand-in for an external binary differ: cosine similarity of
// node-kind and CFG-degree histograms. It is NOT a differ; it only supplies
// plausible before/after scores so the table machinery has something to chew
// on in a self-contained setup.

inline constexpr int kDegreeBuckets = 8;

inline std::vector<double> structural_histogram(const CodePropertyGraph& g) {
  std::vector<double> h(kNumNodeKinds + 2 * kDegreeBuckets, 0.0);
  std::map<int, int> cfg_out, cfg_in;
  for (const CpgEdge& e : g.edges) {
    if (e.type != EdgeType::Cfg) continue;
    ++cfg_out[e.src];
    ++cfg_in[e.dst];
  }
  for (const CpgNode& n : g.nodes) {
    h[static_cast<int>(n.kind)] += 1.0;
    int out_b = std::min(kDegreeBuckets - 1, cfg_out.count(n.id) ? cfg_out[n.id] : 0);
    int in_b = std::min(kDegreeBuckets - 1, cfg_in.count(n.id) ? cfg_in[n.id] : 0);
    h[kNumNodeKinds + out_b] += 1.0;
    h[kNumNodeKinds + kDegreeBuckets + in_b] += 1.0;
  }
  return h;
}

inline double structural_score(const CodePropertyGraph& a, const CodePropertyGraph& b) {
  std::vector<double> ha = structural_histogram(a);
  std::vector<double> hb = structural_histogram(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < ha.size(); ++i) {
    dot += ha[i] * hb[i];
    na += ha[i] * ha[i];
    nb += hb[i] * hb[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

/// Structural scores of functions present under the same name in both
/// corpora, in ascending name order.
inline std::vector<double> score_matched_functions(const FunctionCorpus& a,
                                                   const FunctionCorpus& b) {
  std::map<std::string, const CodePropertyGraph*> by_name;
  for (const CodePropertyGraph& g : b.functions) by_name.emplace(g.function_name, &g);
  std::map<std::string, double> scores;
  for (const CodePropertyGraph& g : a.functions) {
    auto it = by_name.find(g.function_name);
    if (it != by_name.end()) scores[g.function_name] = structural_score(g, *it->second);
  }
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& [name, s] : scores) out.push_back(s);
  return out;
}

// ---- rendering -------------------------------------------------------------

namespace eval_detail {

inline std::string fmt3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << round_display(v, 3);
  return os.str();
}

inline std::string fmt_pct(double v) {
  std::ostringstream os;
  os << static_cast<long long>(round_display(v, 0)) << "%";
  return os.str();
}

}  // namespace eval_detail

/// Human-readable rendering with the published-table rounding applied.
inline std::string render_improvement_table(const ImprovementTable& t) {
  using eval_detail::fmt3;
  using eval_detail::fmt_pct;
  std::ostringstream os;
  auto cell = [&](const ImprovementCell& c) {
    os << std::setw(8) << fmt3(c.before) << std::setw(8) << fmt3(c.after) << std::setw(7)
       << fmt_pct(c.inc_percent);
  };
  os << std::setw(10) << "";
  for (const std::string& c : t.col_envs)
    os << std::setw(13) << c << std::setw(10) << "";
  os << std::setw(13) << "AVG" << "\n";
  for (const std::string& r : t.row_envs) {
    os << std::setw(10) << r;
    for (const std::string& c : t.col_envs) {
      auto it = t.cells.find({r, c});
      if (it != t.cells.end())
        cell(it->second);
      else
        os << std::setw(23) << "-";
    }
    cell(t.row_avg.at(r));
    os << "\n";
  }
  os << std::setw(10) << "AVG";
  for (const std::string& c : t.col_envs) cell(t.col_avg.at(c));
  cell(t.global);
  os << "\n";
  return os.str();
}

inline nlohmann::ordered_json improvement_table_json(const ImprovementTable& t) {
  nlohmann::ordered_json j;
  auto cell_json = [](const ImprovementCell& c) {
    return nlohmann::ordered_json{{"before", round_display(c.before, 3)},
                                  {"after", round_display(c.after, 3)},
                                  {"inc_percent", round_display(c.inc_percent, 0)}};
  };
  nlohmann::ordered_json cells = nlohmann::ordered_json::object();
  for (const auto& [key, c] : t.cells)
    cells[key.first + "|" + key.second] = cell_json(c);
  j["cells"] = std::move(cells);
  nlohmann::ordered_json rows = nlohmann::ordered_json::object();
  for (const auto& [env, c] : t.row_avg) rows[env] = cell_json(c);
  j["row_avg"] = std::move(rows);
  nlohmann::ordered_json cols = nlohmann::ordered_json::object();
  for (const auto& [env, c] : t.col_avg) cols[env] = cell_json(c);
  j["col_avg"] = std::move(cols);
  j["global"] = cell_json(t.global);
  return j;
}

inline nlohmann::ordered_json eval_result_json(const EvalResult& r) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json recall = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.recall_at) recall["recall@" + std::to_string(k)] = v;
  j["recall_at"] = std::move(recall);
  j["secs_per_100"] = r.secs_per_100;
  j["num_queries"] = r.num_queries;
  j["num_candidates"] = r.num_candidates;
  j["workers"] = r.workers;
  return j;
}

}  // namespace regraph
