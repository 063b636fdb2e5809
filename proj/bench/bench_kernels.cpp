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

// Serial reference against OpenMP variant for each kernel. The second
// benchmark argument selects the policy: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "rfs/kernels.hpp"
#include "rfs/models.hpp"
#include "rfs/qstate.hpp"
#include "rfs/random.hpp"

using namespace rfs;

namespace {

Exec policy(const benchmark::State& s) { return s.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_spmv(benchmark::State& state) {
  ModelSpec spec;
  spec.sites = int(state.range(0));
  const SpMat H = build_model(spec).assemble(0.4, 0.8);
  RandomMatrices rng(1);
  RVec x(H.rows()), y(H.rows());
  for (auto& v : x) v = rng.normal();
  for (auto _ : state) {
    kernels::spmv(H, x.data(), y.data(), policy(state));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * H.nonZeros());
}
BENCHMARK(BM_spmv)->ArgsProduct({{12, 16}, {0, 1}});

void BM_root_fidelities(benchmark::State& state) {
  const std::size_t n = 16;
  RandomMatrices rng(2);
  std::vector<CMat> roots;
  for (std::size_t k = 0; k < n * n; ++k) roots.push_back(psd_sqrt(rng.density(state.range(0))));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) pairs.emplace_back(i * n + j, i * n + j + 1);
  std::vector<double> out(pairs.size());
  for (auto _ : state) {
    kernels::root_fidelities(roots, pairs, out.data(), policy(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(pairs.size()));
}
BENCHMARK(BM_root_fidelities)->ArgsProduct({{4, 16}, {0, 1}});

void BM_sobel(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  RandomMatrices rng(3);
  std::vector<double> g(n * n);
  for (auto& v : g) v = rng.uniform();
  std::vector<cplx> out(n * n);
  for (auto _ : state) {
    kernels::sobel(g.data(), n, n, out.data(), policy(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(n * n));
}
BENCHMARK(BM_sobel)->ArgsProduct({{64, 512}, {0, 1}});

void BM_gram(benchmark::State& state) {
  RandomMatrices rng(4);
  RMat X(256, state.range(0));
  for (Eigen::Index k = 0; k < X.size(); ++k) X.data()[k] = rng.normal();
  RMat G;
  for (auto _ : state) {
    kernels::gram(X, G, policy(state));
    benchmark::DoNotOptimize(G.data());
  }
}
BENCHMARK(BM_gram)->ArgsProduct({{64, 512}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
