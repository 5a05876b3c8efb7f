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

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace regraph {

/// Dense row-major matrix of doubles. Small and unclever on purpose; the
/// hot loops live in the free gemm functions below.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  std::size_t size() const { return data.size(); }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }

  bool finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Mat&, const Mat&) = default;
};

// C[n x m] += A[n x k] * B[k x m]. The i-k-j order keeps the inner loop a
// contiguous saxpy that the compiler vectorizes.
inline void gemm_nn(const double* __restrict a, int n, int k, const double* __restrict b,
                    int m, double* __restrict c) {
  for (int i = 0; i < n; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * m;
    for (int p = 0; p < k; ++p) {
      double aip = arow[p];
      if (aip == 0.0) continue;
      const double* brow = b + static_cast<std::size_t>(p) * m;
      for (int j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
}

// C[k x m] += A[n x k]^T * B[n x m]
inline void gemm_tn(const double* __restrict a, int n, int k, const double* __restrict b,
                    int m, double* __restrict c) {
  for (int p = 0; p < n; ++p) {
    const double* arow = a + static_cast<std::size_t>(p) * k;
    const double* brow = b + static_cast<std::size_t>(p) * m;
    for (int i = 0; i < k; ++i) {
      double api = arow[i];
      if (api == 0.0) continue;
      double* crow = c + static_cast<std::size_t>(i) * m;
      for (int j = 0; j < m; ++j) crow[j] += api * brow[j];
    }
  }
}

// C[n x k] += A[n x m] * B[k x m]^T
inline void gemm_nt(const double* __restrict a, int n, int m, const double* __restrict b,
                    int k, double* __restrict c) {
  for (int i = 0; i < n; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * m;
    double* crow = c + static_cast<std::size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const double* brow = b + static_cast<std::size_t>(p) * m;
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += arow[j] * brow[j];
      crow[p] += acc;
    }
  }
}

inline double dot(const double* a, const double* b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace regraph
