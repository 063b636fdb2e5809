// Copyright 2026 The rfsphase Authors
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

#include "rfs/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace rfs::kernels {

namespace {

inline void spmv_row(const SpMat& A, const double* x, double* y,
                     std::int64_t r) {
  const auto* outer = A.outerIndexPtr();
  const auto* inner = A.innerIndexPtr();
  const double* val = A.valuePtr();
  double acc = 0.0;
  for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += val[k] * x[inner[k]];
  y[r] = acc;
}

inline cplx sobel_cell(const double* g, std::size_t rows, std::size_t cols,
                       std::size_t i, std::size_t j) {
  double re = 0.0, im = 0.0;
  for (int a = -1; a <= 1; ++a) {
    const std::int64_t ii = std::int64_t(i) + a;
    if (ii < 0 || ii >= std::int64_t(rows)) continue;
    for (int b = -1; b <= 1; ++b) {
      const std::int64_t jj = std::int64_t(j) + b;
      if (jj < 0 || jj >= std::int64_t(cols)) continue;
      const double v = g[ii * cols + jj];
      re += b * (2 - std::abs(a)) * v;
      im += a * (2 - std::abs(b)) * v;
    }
  }
  return {re, im};
}

}  // namespace

double root_fidelity(const CMat& a, const CMat& b) {
  if (&a == &b || (a.rows() == b.rows() && a == b)) return 1.0;
  CMat p = a * b;
  Eigen::JacobiSVD<CMat> svd(p);
  return std::min(1.0, svd.singularValues().sum());
}

void spmv(const SpMat& A, const double* x, double* y, Exec exec) {
  const std::int64_t n = A.outerSize();
  if (exec == Exec::Serial) {
    for (std::int64_t r = 0; r < n; ++r) spmv_row(A, x, y, r);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) spmv_row(A, x, y, r);
}

void root_fidelities(const std::vector<CMat>& roots,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                     double* out, Exec exec) {
  const std::int64_t n = std::int64_t(pairs.size());
  if (exec == Exec::Serial) {
    for (std::int64_t e = 0; e < n; ++e)
      out[e] = root_fidelity(roots[pairs[e].first], roots[pairs[e].second]);
    return;
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t e = 0; e < n; ++e)
    out[e] = root_fidelity(roots[pairs[e].first], roots[pairs[e].second]);
}

void sobel(const double* g, std::size_t rows, std::size_t cols, cplx* out,
           Exec exec) {
  const std::int64_t n = std::int64_t(rows * cols);
  if (exec == Exec::Serial) {
    for (std::int64_t k = 0; k < n; ++k)
      out[k] = sobel_cell(g, rows, cols, k / cols, k % cols);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k)
    out[k] = sobel_cell(g, rows, cols, k / cols, k % cols);
}

void gram(const RMat& X, RMat& G, Exec exec) {
  const std::int64_t n = X.cols();
  G.resize(n, n);
  auto entry = [&](std::int64_t i, std::int64_t j) {
    const double* a = X.col(i).data();
    const double* b = X.col(j).data();
    double acc = 0.0;
    for (std::int64_t k = 0; k < X.rows(); ++k) acc += a[k] * b[k];
    return acc;
  };
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j <= i; ++j) G(i, j) = G(j, i) = entry(i, j);
    return;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j <= i; ++j) G(i, j) = G(j, i) = entry(i, j);
}

}  // namespace rfs::kernels
