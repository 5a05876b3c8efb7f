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
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "regraph/errors.hpp"
#include "regraph/linalg.hpp"
#include "regraph/rng.hpp"
#include "regraph/vectorizer.hpp"

// Message-passing encoder. One embedding per function:
//
//   u_v   = [kind one-hot | literal flag | log-degree | emb[op_v]]
//   h0_v  = relu(u_v W_in)
//   hk_v  = relu(h(k-1)_v W_self + sum_d mean_{u in N_d(v)} h(k-1)_u W_d + b)
//   e     = sum_v sigmoid(hK_v W_g) (*) (hK_v W_o)
//
// d ranges over the four edge types in both directions (eight matrices);
// a mean over an empty neighbor set is the zero vector. All row vectors;
// every sum runs in ascending node index so results are bit-reproducible.

namespace regraph {

inline constexpr int kModelVersion = 1;
inline constexpr int kNumDirections = 2 * kNumEdgeTypes;  // type-major, fwd/rev

struct GnnParams {
  Mat emb;                               // (V+1) x E, row 0 = OOV
  Mat w_in;                              // (kFeatureDim-1+E) x D
  std::array<Mat, kNumDirections> w_msg; // D x D each
  Mat w_self;                            // D x D
  Mat bias;                              // 1 x D
  Mat w_gate;                            // D x D
  Mat w_out;                             // D x D

  template <typename F>
  void for_each(F&& f) {
    f("emb", emb);
    f("W_in", w_in);
    static const char* names[kNumDirections] = {"W_ast_fwd", "W_ast_rev", "W_cfg_fwd",
                                                "W_cfg_rev", "W_ddg_fwd", "W_ddg_rev",
                                                "W_cdg_fwd", "W_cdg_rev"};
    for (int d = 0; d < kNumDirections; ++d) f(names[d], w_msg[d]);
    f("W_self", w_self);
    f("b", bias);
    f("W_g", w_gate);
    f("W_o", w_out);
  }

  template <typename F>
  void for_each(F&& f) const {
    const_cast<GnnParams*>(this)->for_each(
        [&](const char* name, Mat& m) { f(name, const_cast<const Mat&>(m)); });
  }

  void zero() {
    for_each([](const char*, Mat& m) { m.zero(); });
  }

  bool finite() const {
    bool ok = true;
    for_each([&](const char*, const Mat& m) { ok = ok && m.finite(); });
    return ok;
  }

  friend bool operator==(const GnnParams&, const GnnParams&) = default;
};

struct GnnModel {
  int version = kModelVersion;
  int dim = 64;        // D, embedding width
  int rounds = 3;      // K, message-passing iterations
  int embed_dim = 32;  // E, operator embedding width
  int vocab_size = 0;  // V
  int vocab_version = 1;
  std::uint64_t seed = 0;  // rng seed used at init
  GnnParams p;

  int input_dim() const { return kFeatureDim - 1 + embed_dim; }

  friend bool operator==(const GnnModel&, const GnnModel&) = default;
};

/// Glorot-style uniform init, every matrix drawn in a fixed order from one
/// deterministic stream.
inline GnnModel init_model(int dim, int rounds, int embed_dim, int vocab_size,
                           int vocab_version, std::uint64_t seed) {
  if (dim < 1 || rounds < 0 || embed_dim < 1 || vocab_size < 0)
    throw Error(ErrorKind::InvalidArgument, "bad model hyperparameters");
  GnnModel m;
  m.dim = dim;
  m.rounds = rounds;
  m.embed_dim = embed_dim;
  m.vocab_size = vocab_size;
  m.vocab_version = vocab_version;
  m.seed = seed;

  m.p.emb = Mat(vocab_size + 1, embed_dim);
  m.p.w_in = Mat(m.input_dim(), dim);
  for (auto& w : m.p.w_msg) w = Mat(dim, dim);
  m.p.w_self = Mat(dim, dim);
  m.p.bias = Mat(1, dim);
  m.p.w_gate = Mat(dim, dim);
  m.p.w_out = Mat(dim, dim);

  Rng rng(mix_seed(seed, 0x1217ull));
  m.p.for_each([&](const char*, Mat& w) {
    double limit = std::sqrt(6.0 / (w.rows + w.cols));
    for (double& v : w.data) v = rng.uniform(-limit, limit);
  });
  return m;
}

struct FunctionEmbedding {
  std::vector<double> vector;
  std::string function_name;
  std::string address;
};

// ---- pearson ---------------------------------------------------------------

inline constexpr double kZeroVarianceNorm = 1e-12;

/// Pearson correlation of two equal-length vectors; nullopt when either
/// vector's centered norm falls below 1e-12.
inline std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw Error(ErrorKind::DimensionMismatch,
                "pearson over vectors of size " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (std::sqrt(sxx) < kZeroVarianceNorm || std::sqrt(syy) < kZeroVarianceNorm)
    return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  auto r = try_pearson(x, y);
  if (!r) throw Error(ErrorKind::ZeroVariance, "constant vector has no correlation");
  return *r;
}

inline double pearson(const FunctionEmbedding& x, const FunctionEmbedding& y) {
  return pearson(std::span<const double>(x.vector), std::span<const double>(y.vector));
}

// ---- forward ---------------------------------------------------------------

namespace gnn_detail {

/// Neighbor lists per direction, dense node indices, neighbors ascending.
/// Direction 2*t is "collect from sources of incoming type-t edges";
/// 2*t+1 collects from targets of outgoing ones.
struct Adjacency {
  std::array<std::vector<std::vector<int>>, kNumDirections> lists;

  explicit Adjacency(const EncodedGraph& g) {
    for (auto& l : lists) l.assign(g.num_nodes, {});
    for (const auto& e : g.edges) {
      int t = static_cast<int>(e.type);
      lists[2 * t][e.dst].push_back(e.src);
      lists[2 * t + 1][e.src].push_back(e.dst);
    }
    for (auto& l : lists)
      for (auto& nb : l) std::sort(nb.begin(), nb.end());
  }

  bool any(int d) const {
    for (const auto& nb : lists[d])
      if (!nb.empty()) return true;
    return false;
  }
};

/// mean_{u in N_d(v)} rows[u], zero row when N_d(v) is empty.
inline void aggregate(const Mat& h, const std::vector<std::vector<int>>& nbrs, Mat& out) {
  out.zero();
  const int dim = h.cols;
  for (int v = 0; v < h.rows; ++v) {
    const auto& nb = nbrs[v];
    if (nb.empty()) continue;
    double* dst = out.row(v);
    for (int u : nb) {
      const double* src = h.row(u);
      for (int j = 0; j < dim; ++j) dst[j] += src[j];
    }
    double inv = 1.0 / static_cast<double>(nb.size());
    for (int j = 0; j < dim; ++j) dst[j] *= inv;
  }
}

struct ForwardTrace {
  Mat input;               // n x (kFeatureDim-1+E)
  std::vector<Mat> h;      // rounds+1 states, each n x D
  std::vector<int> op_idx; // per node, into the embedding table
};

inline void check_compatible(const GnnModel& m, const EncodedGraph& g) {
  if (g.num_nodes < 1)
    throw Error(ErrorKind::DimensionMismatch, "cannot embed an empty graph");
  if (g.features.size() != static_cast<std::size_t>(g.num_nodes) * kFeatureDim)
    throw Error(ErrorKind::DimensionMismatch, "feature matrix has wrong width");
  for (int v = 0; v < g.num_nodes; ++v) {
    double slot = g.feature(v, kOpSlot);
    if (slot < 0 || slot > m.vocab_size || slot != std::floor(slot))
      throw Error(ErrorKind::DimensionMismatch,
                  "operator index " + std::to_string(slot) + " outside model vocabulary (" +
                      std::to_string(m.vocab_size) + ")");
  }
}

/// Full forward pass; fills `trace` when training needs it.
inline std::vector<double> forward(const GnnModel& m, const EncodedGraph& g,
                                   const Adjacency& adj, ForwardTrace* trace) {
  check_compatible(m, g);
  const int n = g.num_nodes, dim = m.dim, in_dim = m.input_dim();

  Mat input(n, in_dim);
  std::vector<int> op_idx(n);
  for (int v = 0; v < n; ++v) {
    double* row = input.row(v);
    for (int c = 0; c < kFeatureDim - 1; ++c) row[c] = g.feature(v, c);
    op_idx[v] = static_cast<int>(g.feature(v, kOpSlot));
    const double* erow = m.p.emb.row(op_idx[v]);
    for (int c = 0; c < m.embed_dim; ++c) row[kFeatureDim - 1 + c] = erow[c];
  }

  auto relu_inplace = [](Mat& z) {
    for (double& v : z.data)
      if (v < 0.0) v = 0.0;
  };

  std::vector<Mat> states;
  states.reserve(m.rounds + 1);
  Mat h0(n, dim);
  gemm_nn(input.data.data(), n, in_dim, m.p.w_in.data.data(), dim, h0.data.data());
  relu_inplace(h0);
  states.push_back(std::move(h0));

  Mat agg(n, dim);
  for (int k = 1; k <= m.rounds; ++k) {
    const Mat& prev = states.back();
    Mat z(n, dim);
    for (int v = 0; v < n; ++v) {
      double* zrow = z.row(v);
      const double* b = m.p.bias.row(0);
      for (int j = 0; j < dim; ++j) zrow[j] = b[j];
    }
    gemm_nn(prev.data.data(), n, dim, m.p.w_self.data.data(), dim, z.data.data());
    for (int d = 0; d < kNumDirections; ++d) {
      if (!adj.any(d)) continue;
      aggregate(prev, adj.lists[d], agg);
      gemm_nn(agg.data.data(), n, dim, m.p.w_msg[d].data.data(), dim, z.data.data());
    }
    relu_inplace(z);
    states.push_back(std::move(z));
  }

  const Mat& last = states.back();
  Mat gate(n, dim), out(n, dim);
  gemm_nn(last.data.data(), n, dim, m.p.w_gate.data.data(), dim, gate.data.data());
  gemm_nn(last.data.data(), n, dim, m.p.w_out.data.data(), dim, out.data.data());

  std::vector<double> e(dim, 0.0);
  for (int v = 0; v < n; ++v) {
    const double* grow = gate.row(v);
    const double* orow = out.row(v);
    for (int j = 0; j < dim; ++j) e[j] += (1.0 / (1.0 + std::exp(-grow[j]))) * orow[j];
  }

  if (trace) {
    trace->input = std::move(input);
    trace->h = std::move(states);
    trace->op_idx = std::move(op_idx);
  }
  return e;
}

/// Reverse-mode pass. `d_e` is the loss gradient w.r.t. the embedding;
/// parameter gradients accumulate into `grads` (same shapes as the model).
inline void backward(const GnnModel& m, const EncodedGraph& g, const Adjacency& adj,
                     const ForwardTrace& trace, const std::vector<double>& d_e,
                     GnnParams& grads) {
  const int n = g.num_nodes, dim = m.dim, in_dim = m.input_dim();
  const Mat& last = trace.h.back();

  // readout: e = sum_v sigmoid(h W_g) (*) (h W_o)
  Mat gate(n, dim), out(n, dim);
  gemm_nn(last.data.data(), n, dim, m.p.w_gate.data.data(), dim, gate.data.data());
  gemm_nn(last.data.data(), n, dim, m.p.w_out.data.data(), dim, out.data.data());

  Mat d_s(n, dim), d_o(n, dim);
  for (int v = 0; v < n; ++v) {
    const double* grow = gate.row(v);
    const double* orow = out.row(v);
    double* ds = d_s.row(v);
    double* dov = d_o.row(v);
    for (int j = 0; j < dim; ++j) {
      double sig = 1.0 / (1.0 + std::exp(-grow[j]));
      dov[j] = d_e[j] * sig;
      ds[j] = d_e[j] * orow[j] * sig * (1.0 - sig);
    }
  }
  gemm_tn(last.data.data(), n, dim, d_s.data.data(), dim, grads.w_gate.data.data());
  gemm_tn(last.data.data(), n, dim, d_o.data.data(), dim, grads.w_out.data.data());

  Mat d_h(n, dim);
  gemm_nt(d_s.data.data(), n, dim, m.p.w_gate.data.data(), dim, d_h.data.data());
  gemm_nt(d_o.data.data(), n, dim, m.p.w_out.data.data(), dim, d_h.data.data());

  Mat agg(n, dim), d_agg(n, dim), d_prev(n, dim);
  for (int k = m.rounds; k >= 1; --k) {
    const Mat& h_k = trace.h[k];
    const Mat& h_prev = trace.h[k - 1];

    // relu mask; h > 0 iff z > 0
    Mat d_z = std::move(d_h);
    for (std::size_t i = 0; i < d_z.data.size(); ++i)
      if (h_k.data[i] <= 0.0) d_z.data[i] = 0.0;

    gemm_tn(h_prev.data.data(), n, dim, d_z.data.data(), dim, grads.w_self.data.data());
    for (int v = 0; v < n; ++v) {
      const double* dz = d_z.row(v);
      double* db = grads.bias.row(0);
      for (int j = 0; j < dim; ++j) db[j] += dz[j];
    }

    d_prev.zero();
    gemm_nt(d_z.data.data(), n, dim, m.p.w_self.data.data(), dim, d_prev.data.data());

    for (int d = 0; d < kNumDirections; ++d) {
      if (!adj.any(d)) continue;
      aggregate(h_prev, adj.lists[d], agg);
      gemm_tn(agg.data.data(), n, dim, d_z.data.data(), dim, grads.w_msg[d].data.data());
      d_agg.zero();
      gemm_nt(d_z.data.data(), n, dim, m.p.w_msg[d].data.data(), dim, d_agg.data.data());
      // scatter the mean back onto the contributing neighbors
      const auto& nbrs = adj.lists[d];
      for (int v = 0; v < n; ++v) {
        const auto& nb = nbrs[v];
        if (nb.empty()) continue;
        double inv = 1.0 / static_cast<double>(nb.size());
        const double* da = d_agg.row(v);
        for (int u : nb) {
          double* dp = d_prev.row(u);
          for (int j = 0; j < dim; ++j) dp[j] += inv * da[j];
        }
      }
    }
    d_h = std::move(d_prev);
    d_prev = Mat(n, dim);
  }

  // input layer
  Mat d_z0 = std::move(d_h);
  for (std::size_t i = 0; i < d_z0.data.size(); ++i)
    if (trace.h[0].data[i] <= 0.0) d_z0.data[i] = 0.0;
  gemm_tn(trace.input.data.data(), n, in_dim, d_z0.data.data(), dim,
          grads.w_in.data.data());
  Mat d_u(n, in_dim);
  gemm_nt(d_z0.data.data(), n, dim, m.p.w_in.data.data(), in_dim, d_u.data.data());
  for (int v = 0; v < n; ++v) {
    double* erow = grads.emb.row(trace.op_idx[v]);
    const double* du = d_u.row(v) + (kFeatureDim - 1);
    for (int c = 0; c < m.embed_dim; ++c) erow[c] += du[c];
  }
}

}  // namespace gnn_detail

// Instrumentation: embeddings computed since the last reset. Lets callers
// assert caching behavior (e.g. one embedding per candidate per match run).
inline std::atomic<std::uint64_t>& embed_counter() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

inline std::uint64_t embed_call_count() { return embed_counter().load(); }
inline void reset_embed_call_count() { embed_counter().store(0); }

/// Encodes one graph into its function vector. Pure, thread-safe on a shared
/// model, deterministic, invariant under node-id relabeling up to
/// floating-point summation order.
inline FunctionEmbedding embed(const GnnModel& model, const EncodedGraph& g) {
  gnn_detail::Adjacency adj(g);
  embed_counter().fetch_add(1, std::memory_order_relaxed);
  return {gnn_detail::forward(model, g, adj, nullptr), g.function_name, g.address};
}

// ---- pair loss with exact gradients ----------------------------------------

struct LossResult {
  double loss = 0.0;
  GnnParams grads;  // same shapes as the model parameters
  int skipped_pairs = 0;
  std::optional<double> r_positive;
  std::vector<double> r_negatives;
};

namespace gnn_detail {

inline GnnParams zero_like(const GnnModel& m) {
  GnnParams g;
  g.emb = Mat(m.p.emb.rows, m.p.emb.cols);
  g.w_in = Mat(m.p.w_in.rows, m.p.w_in.cols);
  for (int d = 0; d < kNumDirections; ++d)
    g.w_msg[d] = Mat(m.p.w_msg[d].rows, m.p.w_msg[d].cols);
  g.w_self = Mat(m.p.w_self.rows, m.p.w_self.cols);
  g.bias = Mat(m.p.bias.rows, m.p.bias.cols);
  g.w_gate = Mat(m.p.w_gate.rows, m.p.w_gate.cols);
  g.w_out = Mat(m.p.w_out.rows, m.p.w_out.cols);
  return g;
}

/// d r / d x for r = pearson(x, y). Both centered vectors are already
/// mean-free, so the centering projector drops out.
inline void pearson_grad(std::span<const double> x, std::span<const double> y, double r,
                         double upstream, std::vector<double>& dx, std::vector<double>& dy) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  double denom = std::sqrt(sxx * syy);
  for (std::size_t i = 0; i < n; ++i) {
    double cx = x[i] - mx, cy = y[i] - my;
    dx[i] += upstream * (cy / denom - r * cx / sxx);
    dy[i] += upstream * (cx / denom - r * cy / syy);
  }
}

}  // namespace gnn_detail

/// loss = (1 - r(a,p))^2 + sum_n max(0, r(a,n) - margin)^2, with exact
/// reverse-mode gradients through embedding and pearson. Degenerate
/// (zero-variance) pairs contribute nothing and are counted as skipped.
inline LossResult loss_and_gradients(const GnnModel& model, const EncodedGraph& anchor,
                                     const EncodedGraph& positive,
                                     const std::vector<const EncodedGraph*>& negatives,
                                     double margin) {
  using namespace gnn_detail;

  LossResult result;
  result.grads = zero_like(model);

  Adjacency adj_a(anchor), adj_p(positive);
  ForwardTrace tr_a, tr_p;
  std::vector<double> e_a = forward(model, anchor, adj_a, &tr_a);
  std::vector<double> e_p = forward(model, positive, adj_p, &tr_p);

  std::vector<double> d_a(model.dim, 0.0), d_p(model.dim, 0.0);

  auto r_ap = try_pearson(std::span<const double>(e_a), std::span<const double>(e_p));
  if (r_ap) {
    result.r_positive = *r_ap;
    result.loss += (1.0 - *r_ap) * (1.0 - *r_ap);
    pearson_grad(e_a, e_p, *r_ap, -2.0 * (1.0 - *r_ap), d_a, d_p);
  } else {
    ++result.skipped_pairs;
  }

  struct NegState {
    const EncodedGraph* g;
    std::unique_ptr<Adjacency> adj;
    ForwardTrace trace;
    std::vector<double> e;
    std::vector<double> d;
    bool active = false;
  };
  std::vector<NegState> negs;
  negs.reserve(negatives.size());
  for (const EncodedGraph* ng : negatives) {
    NegState st;
    st.g = ng;
    st.adj = std::make_unique<Adjacency>(*ng);
    st.e = forward(model, *ng, *st.adj, &st.trace);
    auto r = try_pearson(std::span<const double>(e_a), std::span<const double>(st.e));
    if (!r) {
      ++result.skipped_pairs;
    } else {
      result.r_negatives.push_back(*r);
      double slack = *r - margin;
      if (slack > 0.0) {
        result.loss += slack * slack;
        st.d.assign(model.dim, 0.0);
        pearson_grad(e_a, st.e, *r, 2.0 * slack, d_a, st.d);
        st.active = true;
      }
    }
    negs.push_back(std::move(st));
  }

  auto nonzero = [](const std::vector<double>& v) {
    for (double x : v)
      if (x != 0.0) return true;
    return false;
  };
  if (nonzero(d_a)) backward(model, anchor, adj_a, tr_a, d_a, result.grads);
  if (nonzero(d_p)) backward(model, positive, adj_p, tr_p, d_p, result.grads);
  for (auto& st : negs)
    if (st.active && nonzero(st.d)) backward(model, *st.g, *st.adj, st.trace, st.d, result.grads);
  return result;
}

// ---- persistence -----------------------------------------------------------
//
// {"version":1,"hyper":{...},"params":{"<name>":{"shape":[..],"data":[..]}}}
// Numbers are written in shortest round-trip form, so load(save(m)) is
// bit-equal to m.

inline void save_model(const GnnModel& m, const std::filesystem::path& path) {
  if (!m.p.finite())
    throw Error(ErrorKind::InvalidArgument, "refusing to save non-finite parameters");
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["hyper"] = {{"dim", m.dim},
                {"rounds", m.rounds},
                {"embed_dim", m.embed_dim},
                {"vocab_size", m.vocab_size},
                {"vocab_version", m.vocab_version},
                {"seed", m.seed}};
  nlohmann::ordered_json params;
  m.p.for_each([&](const char* name, const Mat& w) {
    nlohmann::ordered_json p;
    if (w.rows == 1)
      p["shape"] = {w.cols};
    else
      p["shape"] = {w.rows, w.cols};
    p["data"] = w.data;
    params[name] = std::move(p);
  });
  j["params"] = std::move(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << j.dump() << "\n";
  if (!out) throw Error(ErrorKind::IoFailure, "short write to " + path.string());
}

inline GnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptFile, path.string() + ": " + e.what());
  }
  try {
    int version = j.at("version").get<int>();
    if (version != kModelVersion)
      throw Error(ErrorKind::VersionUnknown,
                  path.string() + ": unknown model version " + std::to_string(version));
    const auto& h = j.at("hyper");
    GnnModel m = init_model(h.at("dim").get<int>(), h.at("rounds").get<int>(),
                            h.at("embed_dim").get<int>(), h.at("vocab_size").get<int>(),
                            h.at("vocab_version").get<int>(), h.at("seed").get<std::uint64_t>());
    const auto& params = j.at("params");
    m.p.for_each([&](const char* name, Mat& w) {
      const auto& p = params.at(name);
      auto shape = p.at("shape").get<std::vector<int>>();
      int rows = shape.size() == 1 ? 1 : shape.at(0);
      int cols = shape.size() == 1 ? shape.at(0) : shape.at(1);
      if (rows != w.rows || cols != w.cols)
        throw Error(ErrorKind::CorruptFile, path.string() + ": parameter " + name +
                                                " has unexpected shape");
      auto data = p.at("data").get<std::vector<double>>();
      if (data.size() != w.data.size())
        throw Error(ErrorKind::CorruptFile,
                    path.string() + ": parameter " + name + " has wrong element count");
      w.data = std::move(data);
    });
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptFile, path.string() + ": " + e.what());
  }
}

}  // namespace regraph
