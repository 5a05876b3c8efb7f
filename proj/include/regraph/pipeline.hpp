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
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/graph_json.hpp"
#include "regraph/joern.hpp"

// Preprocessing chain: lift the binary to IR, re-optimize at the highest
// level, decompile to pseudo-C, extract CPGs. Tools plug in as command
// templates; the FIXTURE backend substitutes pre-generated sibling artifacts
// so everything downstream runs with no external installs.

namespace regraph {

enum class Backend { EXTERNAL, FIXTURE };

enum class Stage { LIFT, REOPT, DECOMPILE, EXTRACT_CPG };

inline constexpr int kNumStages = 4;

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::LIFT: return "lift";
    case Stage::REOPT: return "reopt";
    case Stage::DECOMPILE: return "decompile";
    case Stage::EXTRACT_CPG: return "extract_cpg";
  }
  return "lift";
}

/// Suffix appended to the input binary's file name for each stage's artifact.
inline std::string_view stage_suffix(Stage s) {
  switch (s) {
    case Stage::LIFT: return ".lift.ll";
    case Stage::REOPT: return ".reopt.ll";
    case Stage::DECOMPILE: return ".dec.c";
    case Stage::EXTRACT_CPG: return ".cpg.json";
  }
  return ".lift.ll";
}

struct ToolchainConfig {
  std::string lifter_cmd;         // {in} {out}
  std::string optimizer_cmd;      // {in} {out} {opt_level}
  std::string decompiler_cmd;     // {in} {out}
  std::string cpg_extractor_cmd;  // {in} {out}
  std::filesystem::path work_dir;
  int timeout_secs = 300;
  Backend backend = Backend::FIXTURE;
};

// Re-optimization always targets the highest level; a per-run knob would
// break cross-level comparability.
inline constexpr const char* kReoptLevel = "O3";

inline void validate_toolchain(const ToolchainConfig& cfg) {
  if (cfg.timeout_secs < 1)
    throw Error(ErrorKind::InvalidArgument, "timeout_secs must be at least 1");
  if (cfg.work_dir.empty())
    throw Error(ErrorKind::InvalidArgument, "work_dir must be set");
  if (cfg.backend == Backend::EXTERNAL) {
    if (cfg.lifter_cmd.empty() || cfg.optimizer_cmd.empty() || cfg.decompiler_cmd.empty() ||
        cfg.cpg_extractor_cmd.empty())
      throw Error(ErrorKind::InvalidArgument,
                  "EXTERNAL backend requires all four command templates");
  }
}

struct BinaryJob {
  std::filesystem::path input_path;
  Provenance provenance;
  std::string name;  // unique key for artifact and log directories
};

enum class TreeLayout { DEFAULT_TREE, FLAT };

namespace pipeline_detail {

inline bool is_artifact(const std::filesystem::path& p) {
  std::string s = p.filename().string();
  for (int i = 0; i < kNumStages; ++i) {
    std::string_view suffix = stage_suffix(static_cast<Stage>(i));
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                              suffix) == 0)
      return true;
  }
  return s.size() > 4 && s.compare(s.size() - 4, 4, ".log") == 0;
}

inline std::string job_name_from(const std::filesystem::path& rel) {
  std::string name = rel.generic_string();
  for (char& ch : name)
    if (ch == '/') ch = '_';
  return name;
}

}  // namespace pipeline_detail

/// Walks `root` for input binaries. DEFAULT_TREE expects
/// root/project/architecture/opt_level/file and reads provenance from the
/// path; FLAT takes every regular file with provenance "unknown". Stage
/// artifacts and logs are skipped. Jobs come back sorted by path.
inline std::vector<BinaryJob> discover_jobs(const std::filesystem::path& root,
                                            TreeLayout layout) {
  namespace fs = std::filesystem;
  if (!fs::exists(root))
    throw Error(ErrorKind::IoFailure, "no such directory: " + root.string());

  std::vector<BinaryJob> jobs;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (pipeline_detail::is_artifact(p)) continue;
    if (fs::file_size(p) == 0) continue;
    fs::path rel = fs::relative(p, root);
    std::vector<std::string> parts;
    for (const auto& seg : rel) parts.push_back(seg.string());

    BinaryJob job;
    job.input_path = p;
    job.name = pipeline_detail::job_name_from(rel);
    if (layout == TreeLayout::DEFAULT_TREE) {
      if (parts.size() != 4) continue;
      job.provenance = {parts[0], parts[1], parts[2]};
    }
    jobs.push_back(std::move(job));
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const BinaryJob& a, const BinaryJob& b) { return a.input_path < b.input_path; });
  if (jobs.empty())
    throw Error(ErrorKind::EmptyRoot, "no input binaries under " + root.string());
  return jobs;
}

namespace pipeline_detail {

inline std::filesystem::path stage_output(const ToolchainConfig& cfg, const BinaryJob& job,
                                          Stage stage) {
  return cfg.work_dir / job.name /
         (job.input_path.filename().string() + std::string(stage_suffix(stage)));
}

inline std::filesystem::path stage_input(const ToolchainConfig& cfg, const BinaryJob& job,
                                         Stage stage) {
  return stage == Stage::LIFT
             ? job.input_path
             : stage_output(cfg, job, static_cast<Stage>(static_cast<int>(stage) - 1));
}

inline const std::string& command_for(const ToolchainConfig& cfg, Stage stage) {
  switch (stage) {
    case Stage::LIFT: return cfg.lifter_cmd;
    case Stage::REOPT: return cfg.optimizer_cmd;
    case Stage::DECOMPILE: return cfg.decompiler_cmd;
    case Stage::EXTRACT_CPG: return cfg.cpg_extractor_cmd;
  }
  return cfg.lifter_cmd;
}

inline std::string substitute(std::string tmpl, const std::string& in,
                              const std::string& out) {
  auto replace_all = [&](const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = tmpl.find(key, pos)) != std::string::npos) {
      tmpl.replace(pos, key.size(), value);
      pos += value.size();
    }
  };
  replace_all("{in}", in);
  replace_all("{out}", out);
  replace_all("{opt_level}", kReoptLevel);
  return tmpl;
}

inline std::string tail_of_file(const std::filesystem::path& p, std::size_t max_bytes = 2000) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string s = buf.str();
  if (s.size() > max_bytes) s = "..." + s.substr(s.size() - max_bytes);
  return s;
}

/// Runs `command` under /bin/sh with both streams captured to `log_path`,
/// killing the whole process group after `timeout_secs`.
inline void run_command(const std::string& command, const std::filesystem::path& log_path,
                        int timeout_secs, const std::string& what) {
  int log_fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (log_fd < 0) throw Error(ErrorKind::IoFailure, "cannot open log " + log_path.string());

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(log_fd);
    throw Error(ErrorKind::ToolFailure, "fork failed for " + what);
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(log_fd, STDOUT_FILENO);
    ::dup2(log_fd, STDERR_FILENO);
    ::close(log_fd);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(log_fd);

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(timeout_secs);
  int status = 0;
  while (true) {
    pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw Error(ErrorKind::ToolFailure, "waitpid failed for " + what);
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw Error(ErrorKind::Timeout,
                  what + " exceeded " + std::to_string(timeout_secs) + "s and was killed");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    std::string detail = tail_of_file(log_path);
    std::string code = WIFEXITED(status) ? std::to_string(WEXITSTATUS(status)) : "signal";
    throw Error(ErrorKind::ToolFailure,
                what + " exited with " + code + (detail.empty() ? "" : ": " + detail));
  }
}

}  // namespace pipeline_detail

/// Runs one stage for one job and returns the artifact path. Stages must run
/// in order; a missing predecessor artifact is rejected, not silently
/// regenerated.
inline std::filesystem::path run_stage(const BinaryJob& job, Stage stage,
                                       const ToolchainConfig& cfg) {
  namespace fs = std::filesystem;
  using namespace pipeline_detail;
  validate_toolchain(cfg);
  if (!fs::exists(job.input_path) || fs::file_size(job.input_path) == 0)
    throw Error(ErrorKind::IoFailure,
                "input binary missing or empty: " + job.input_path.string());

  fs::path in = stage_input(cfg, job, stage);
  if (stage != Stage::LIFT && !fs::exists(in)) {
    Stage prev = static_cast<Stage>(static_cast<int>(stage) - 1);
    throw Error(ErrorKind::StageOrder,
                std::string(stage_name(stage)) + " requires the " +
                    std::string(stage_name(prev)) + " output; run stages in order");
  }

  fs::path out = stage_output(cfg, job, stage);
  fs::create_directories(out.parent_path());

  if (cfg.backend == Backend::FIXTURE) {
    fs::path fixture = job.input_path;
    fixture += std::string(stage_suffix(stage));
    if (!fs::exists(fixture))
      throw Error(ErrorKind::MissingFixture,
                  "no fixture artifact " + fixture.string() + " for stage " +
                      std::string(stage_name(stage)));
    fs::copy_file(fixture, out, fs::copy_options::overwrite_existing);
    return out;
  }

  fs::path log_dir = cfg.work_dir / "logs" / job.name;
  fs::create_directories(log_dir);
  fs::path log_path = log_dir / (std::string(stage_name(stage)) + ".log");
  std::string cmd = substitute(command_for(cfg, stage), in.string(), out.string());
  run_command(cmd, log_path, cfg.timeout_secs,
              std::string(stage_name(stage)) + " for job " + job.name);
  if (!fs::exists(out))
    throw Error(ErrorKind::ToolFailure,
                std::string(stage_name(stage)) + " for job " + job.name +
                    " exited cleanly but produced no output at " + out.string());
  return out;
}

inline int worker_count() {
  const char* env = std::getenv("REGRAPH_WORKERS");
  if (!env || !*env) return 1;
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

/// Full chain over every job under `root`: per-job failures are logged and
/// skipped; each surviving job's functions are written as canonical
/// GRAPH_JSON into `out_dir` and merged into the returned corpus.
inline FunctionCorpus preprocess(const std::filesystem::path& root, const ToolchainConfig& cfg,
                                 const std::filesystem::path& out_dir,
                                 std::vector<std::string>* failures_out = nullptr) {
  namespace fs = std::filesystem;
  validate_toolchain(cfg);
  std::vector<BinaryJob> jobs = discover_jobs(root, TreeLayout::DEFAULT_TREE);
  fs::create_directories(out_dir);
  fs::create_directories(cfg.work_dir);

  struct JobResult {
    bool ok = false;
    FunctionCorpus corpus;
    std::string error;
  };
  std::vector<JobResult> results(jobs.size());

  auto run_job = [&](std::size_t i) {
    const BinaryJob& job = jobs[i];
    JobResult& res = results[i];
    try {
      fs::path cpg_path;
      for (int s = 0; s < kNumStages; ++s)
        cpg_path = run_stage(job, static_cast<Stage>(s), cfg);
      FunctionCorpus corpus = import_cpg_export(cpg_path, detect_cpg_format(cpg_path));
      for (CodePropertyGraph& g : corpus.functions) g.provenance = job.provenance;
      validate_corpus(corpus);
      res.corpus = std::move(corpus);
      res.ok = true;
    } catch (const Error& e) {
      res.error = e.what();
    }
  };

  int workers = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
          run_job(i);
      });
    for (std::thread& t : pool) t.join();
  }

  FunctionCorpus merged;
  int failed = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const BinaryJob& job = jobs[i];
    JobResult& res = results[i];
    if (!res.ok) {
      ++failed;
      fs::path log_dir = cfg.work_dir / "logs" / job.name;
      fs::create_directories(log_dir);
      std::ofstream err(log_dir / "error.log", std::ios::binary);
      err << res.error << "\n";
      if (failures_out) failures_out->push_back(job.name + ": " + res.error);
      continue;
    }
    serialize_corpus(res.corpus, out_dir / (job.name + ".graph.json"));
    for (CodePropertyGraph& g : res.corpus.functions)
      merged.functions.push_back(std::move(g));
  }
  if (failed == static_cast<int>(jobs.size()))
    throw Error(ErrorKind::AllJobsFailed, "all " + std::to_string(failed) +
                                              " jobs failed; first error: " +
                                              results[0].error);
  return merged;
}

}  // namespace regraph
