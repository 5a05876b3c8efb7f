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
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "regraph/errors.hpp"
#include "regraph/graph_json.hpp"
#include "regraph/model.hpp"
#include "regraph/vectorizer.hpp"
#include "regraph/xlsx.hpp"

namespace regraph {

struct MatchRequest {
  std::string model_path;
  std::string op_file_path;
  std::string target_path;     // GRAPH_JSON corpus
  std::string candidate_path;  // GRAPH_JSON corpus
  int k = 5;
  std::string output_path;
  int max_nodes = kDefaultMaxNodes;
};

struct ReportRow {
  std::string target_function;
  int rank = 0;
  std::string candidate_function;
  std::string candidate_address;
  double score = 0.0;
  std::string flags;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportMetadata {
  int model_version = 0;
  int vocab_version = 0;
  int k = 0;
  std::string timestamp;  // informational; never serialized into the report
};

struct SimilarityReport {
  std::vector<ReportRow> rows;
  ReportMetadata meta;
};

enum class ReportFormat { CSV, XLSX };

// Degenerate functions cannot be scored with Pearson; they receive a sentinel
// score of -2 (below the valid [-1, 1] range) so they sort to the bottom, and
// the reason is spelled out in the flags column.
inline constexpr double kDegenerateScore = -2.0;

namespace matcher_detail {

struct PreparedFunction {
  std::string display_name;
  std::string address;
  bool oversized = false;
  bool zero_variance = false;
  std::vector<double> embedding;
};

inline std::string display_name(const CodePropertyGraph& g) {
  return g.function_name.empty() ? "function_" + g.address : g.function_name;
}

inline bool has_zero_variance(const std::vector<double>& v) {
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss) < kZeroVarianceNorm;
}

/// Embeds every function of the corpus exactly once.
inline std::vector<PreparedFunction> prepare(const FunctionCorpus& corpus,
                                             const GnnModel& model,
                                             const OperatorVocabulary& vocab,
                                             int max_nodes) {
  std::vector<PreparedFunction> out;
  out.reserve(corpus.functions.size());
  for (const CodePropertyGraph& g : corpus.functions) {
    PreparedFunction pf;
    pf.display_name = display_name(g);
    pf.address = g.address;
    if (is_oversized(g, max_nodes)) {
      pf.oversized = true;
    } else {
      pf.embedding = embed(model, encode(g, vocab, max_nodes)).vector;
      pf.zero_variance = has_zero_variance(pf.embedding);
    }
    out.push_back(std::move(pf));
  }
  return out;
}

inline std::string join_flags(std::initializer_list<const char*> candidates,
                              std::initializer_list<bool> active) {
  std::string out;
  auto c = candidates.begin();
  for (bool a : active) {
    if (a) {
      if (!out.empty()) out += '|';
      out += *c;
    }
    ++c;
  }
  return out;
}

inline std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace matcher_detail

/// Ranks every candidate against every target. Candidate embeddings are
/// computed once and reused across targets. Rows per target are sorted by
/// score descending, ties by ascending candidate address then name.
inline SimilarityReport match_corpora(const GnnModel& model, const OperatorVocabulary& vocab,
                                      const FunctionCorpus& target,
                                      const FunctionCorpus& candidate, int k,
                                      int max_nodes = kDefaultMaxNodes) {
  using namespace matcher_detail;
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (target.functions.empty())
    throw Error(ErrorKind::EmptyCorpus, "target corpus has no functions");
  if (candidate.functions.empty())
    throw Error(ErrorKind::EmptyCorpus, "candidate corpus has no functions");
  if (vocab.version != model.vocab_version)
    throw Error(ErrorKind::VocabModelMismatch,
                "op_file version " + std::to_string(vocab.version) +
                    " does not match the model's vocabulary version " +
                    std::to_string(model.vocab_version));
  if (static_cast<int>(vocab.size()) != model.vocab_size)
    throw Error(ErrorKind::VocabModelMismatch,
                "op_file has " + std::to_string(vocab.size()) +
                    " operators but the model was trained with " +
                    std::to_string(model.vocab_size));

  std::vector<PreparedFunction> cands = prepare(candidate, model, vocab, max_nodes);
  std::vector<PreparedFunction> targets = prepare(target, model, vocab, max_nodes);

  SimilarityReport report;
  report.meta = {model.version, vocab.version, k, utc_timestamp()};

  struct Scored {
    double score;
    std::string flags;
    const PreparedFunction* cand;
  };

  const int kept = std::min<int>(k, static_cast<int>(cands.size()));
  std::vector<Scored> scored(cands.size());
  for (const PreparedFunction& t : targets) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const PreparedFunction& c = cands[i];
      bool degenerate = t.oversized || c.oversized || t.zero_variance || c.zero_variance;
      Scored s;
      s.cand = &c;
      if (degenerate) {
        s.score = kDegenerateScore;
        s.flags = join_flags(
            {"target_oversized", "candidate_oversized", "target_zero_var",
             "candidate_zero_var"},
            {t.oversized, c.oversized, t.zero_variance, c.zero_variance});
      } else {
        s.score = pearson(std::span<const double>(t.embedding),
                          std::span<const double>(c.embedding));
      }
      scored[i] = std::move(s);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.cand->address != b.cand->address) return a.cand->address < b.cand->address;
      return a.cand->display_name < b.cand->display_name;
    });
    for (int r = 0; r < kept; ++r) {
      const Scored& s = scored[r];
      report.rows.push_back(
          {t.display_name, r + 1, s.cand->display_name, s.cand->address, s.score, s.flags});
    }
  }
  return report;
}

// ---- report I/O ------------------------------------------------------------

inline const char* kReportHeader =
    "target_function,rank,candidate_function,candidate_address,score,flags";

namespace matcher_detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", score);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted)
    throw Error(ErrorKind::MalformedLine,
                "line " + std::to_string(lineno) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace matcher_detail

inline void write_report_csv(const SimilarityReport& report, const std::filesystem::path& path) {
  using namespace matcher_detail;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << kReportHeader << "\n";
  for (const ReportRow& r : report.rows) {
    out << csv_field(r.target_function) << ',' << r.rank << ','
        << csv_field(r.candidate_function) << ',' << csv_field(r.candidate_address) << ','
        << format_score(r.score) << ',' << csv_field(r.flags) << "\n";
  }
  if (!out) throw Error(ErrorKind::IoFailure, "short write to " + path.string());
}

inline void write_report_xlsx(const SimilarityReport& report, const std::filesystem::path& path) {
  using namespace matcher_detail;
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"target_function", "rank", "candidate_function", "candidate_address",
                  "score", "flags"});
  for (const ReportRow& r : report.rows)
    rows.push_back({r.target_function, std::to_string(r.rank), r.candidate_function,
                    r.candidate_address, format_score(r.score), r.flags});
  write_xlsx(rows, path);
}

inline void report_write(const SimilarityReport& report, const std::filesystem::path& path,
                         ReportFormat format) {
  if (format == ReportFormat::CSV)
    write_report_csv(report, path);
  else
    write_report_xlsx(report, path);
}

/// Parses a report CSV back into rows (metadata is not stored in the file).
inline SimilarityReport read_report_csv(const std::filesystem::path& path) {
  using namespace matcher_detail;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::MalformedLine, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportHeader)
    throw Error(ErrorKind::MalformedLine, path.string() + ": unexpected header '" + line + "'");

  SimilarityReport report;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line, lineno);
    if (fields.size() != 6)
      throw Error(ErrorKind::MalformedLine, path.string() + ": line " +
                                                std::to_string(lineno) + ": expected 6 fields, got " +
                                                std::to_string(fields.size()));
    ReportRow r;
    r.target_function = fields[0];
    try {
      r.rank = std::stoi(fields[1]);
      r.score = std::stod(fields[4]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::MalformedLine,
                  path.string() + ": line " + std::to_string(lineno) + ": bad number");
    }
    r.candidate_function = fields[2];
    r.candidate_address = fields[3];
    r.flags = fields[5];
    report.rows.push_back(std::move(r));
  }
  return report;
}

/// Loads everything named by the request, ranks, and writes the report.
/// The output format follows the file extension (.xlsx selects XLSX).
inline SimilarityReport match(const MatchRequest& req) {
  GnnModel model = load_model(req.model_path);
  OperatorVocabulary vocab = load_vocabulary(req.op_file_path);
  FunctionCorpus target = import_graph_json(req.target_path);
  FunctionCorpus candidate = import_graph_json(req.candidate_path);
  SimilarityReport report =
      match_corpora(model, vocab, target, candidate, req.k, req.max_nodes);
  if (!req.output_path.empty()) {
    std::filesystem::path out(req.output_path);
    ReportFormat fmt = out.extension() == ".xlsx" ? ReportFormat::XLSX : ReportFormat::CSV;
    report_write(report, out, fmt);
  }
  return report;
}

}  // namespace regraph
