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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "rfs/kernels.hpp"
#include "rfs/models.hpp"
#include "rfs/qstate.hpp"
#include "rfs/random.hpp"

using namespace rfs;

TEST_CASE("spmv serial and parallel agree with the dense product") {
  ModelSpec s;
  s.sites = 10;
  const SpMat H = build_model(s).assemble(0.4, 0.9);
  RandomMatrices rng(1);
  RVec x(H.rows());
  for (auto& v : x) v = rng.normal();
  RVec ys(H.rows()), yp(H.rows());
  kernels::spmv(H, x.data(), ys.data(), Exec::Serial);
  kernels::spmv(H, x.data(), yp.data(), Exec::Parallel);
  CHECK((ys - yp).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ys - oracle::dense(H) * x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("root fidelities match the Uhlmann fidelity") {
  RandomMatrices rng(2);
  std::vector<CMat> rhos, roots;
  for (int i = 0; i < 6; ++i) {
    rhos.push_back(rng.density(4, 1 + i % 4));
    roots.push_back(psd_sqrt(rhos.back()));
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) pairs.emplace_back(a, b);
  std::vector<double> s(pairs.size()), p(pairs.size());
  kernels::root_fidelities(roots, pairs, s.data(), Exec::Serial);
  kernels::root_fidelities(roots, pairs, p.data(), Exec::Parallel);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    CHECK(s[e] == p[e]);
    const double F = uhlmann_fidelity(DensityMatrix(rhos[pairs[e].first]),
                                      DensityMatrix(rhos[pairs[e].second]));
    CHECK(s[e] * s[e] == doctest::Approx(F).epsilon(1e-10));
    if (pairs[e].first == pairs[e].second) CHECK(s[e] == 1.0);
  }
}

TEST_CASE("Sobel on a linear ramp") {
  // g = alpha * row + beta * col: interior response is 8 beta + 8i alpha.
  const std::size_t R = 5, C = 6;
  const double alpha = 0.7, beta = -1.3;
  std::vector<double> g(R * C);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) g[i * C + j] = alpha * double(i) + beta * double(j);
  std::vector<cplx> s(R * C), p(R * C);
  kernels::sobel(g.data(), R, C, s.data(), Exec::Serial);
  kernels::sobel(g.data(), R, C, p.data(), Exec::Parallel);
  for (std::size_t k = 0; k < R * C; ++k) CHECK(s[k] == p[k]);
  for (std::size_t i = 1; i + 1 < R; ++i)
    for (std::size_t j = 1; j + 1 < C; ++j) {
      CHECK(s[i * C + j].real() == doctest::Approx(8 * beta));
      CHECK(s[i * C + j].imag() == doctest::Approx(8 * alpha));
    }
  // Corner with zero padding: explicit sum.
  const double re00 = 2 * g[1] + 1 * g[C + 1];
  const double im00 = 2 * g[C] + 1 * g[C + 1];
  CHECK(s[0].real() == doctest::Approx(re00));
  CHECK(s[0].imag() == doctest::Approx(im00));
}

TEST_CASE("Sobel propagates NaN to its neighborhood only") {
  std::vector<double> g(25, 1.0);
  g[0] = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> s(25);
  kernels::sobel(g.data(), 5, 5, s.data(), Exec::Serial);
  CHECK(std::isnan(s[6].real()));
  CHECK(std::isfinite(s[12].real()));
  CHECK(std::isfinite(s[3].real()));
}

TEST_CASE("Gram kernel") {
  RandomMatrices rng(3);
  RMat X(30, 7);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  RMat Gs, Gp;
  kernels::gram(X, Gs, Exec::Serial);
  kernels::gram(X, Gp, Exec::Parallel);
  CHECK((Gs - Gp).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Gs - X.transpose() * X).cwiseAbs().maxCoeff() < 1e-12);
}
