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

#include "rfs/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "rfs/error.hpp"
#include "rfs/kernels.hpp"

namespace rfs {

using Eigen::Index;

void ParameterLattice::validate() const {
  if (rows < 1 || cols < 1) fail(ErrorCode::InvalidSpec, "empty lattice");
  if (!(step1 > 0.0) || !(step2 > 0.0))
    fail(ErrorCode::InvalidSpec, "lattice steps must be positive");
}

namespace {

double inf_norm(const SpMat& H) {
  double best = 0.0;
  for (Index r = 0; r < H.outerSize(); ++r) {
    double s = 0.0;
    for (SpMat::InnerIterator it(H, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Uniform in [-1, 1) built from raw engine bits, so the sequence does not
// depend on the standard library's distribution implementations.
RVec random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RVec v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = double(rng() >> 11) * 0x1.0p-52 - 1.0;
  return v;
}

void fix_sign(Eigen::Ref<RVec> v) {
  Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0) v = -v;
}

// Two classical Gram-Schmidt passes against the locked vectors Q and the
// first `cols` Krylov vectors.
void orthogonalize(const RMat& Q, const RMat& V, Index cols, RVec& w) {
  for (int pass = 0; pass < 2; ++pass) {
    if (Q.cols() > 0) {
      RVec c = Q.transpose() * w;
      w.noalias() -= Q * c;
    }
    RVec c = V.leftCols(cols).transpose() * w;
    w.noalias() -= V.leftCols(cols) * c;
  }
}

struct KrylovRun {
  RVec values;
  RMat vectors;
  bool converged = false;
};

// Restarted Lanczos with full reorthogonalization for the k lowest pairs of
// H restricted to the complement of span(Q). `v` is the start vector.
KrylovRun krylov_run(const SpMat& H, int k, RVec v, const RMat& Q,
                     const LanczosOptions& opts, double hnorm,
                     std::uint64_t& stream, int& matvecs, int& steps) {
  const Index n = H.rows();
  const double tol = opts.tol_rel * hnorm;
  const Index mmax = std::min<Index>(opts.krylov_max, n - Q.cols());
  RMat V(n, mmax);
  RVec w(n);
  KrylovRun out;
  {
    RMat none(n, 0);
    orthogonalize(Q, none, 0, v);
    const double nv = v.norm();
    if (!(nv > 1e-12)) {
      v = random_vector(n, ++stream * 0x9e3779b97f4a7c15ULL);
      orthogonalize(Q, none, 0, v);
    }
    v.normalize();
  }

  while (true) {
    V.col(0) = v;
    std::vector<double> alpha, beta;
    RVec theta;
    RMat S;
    Index m = 0;
    auto ritz = [&]() {
      Eigen::SelfAdjointEigenSolver<RMat> es;
      RVec d = Eigen::Map<RVec>(alpha.data(), Index(alpha.size()));
      RVec e = beta.empty() ? RVec(0)
                            : RVec(Eigen::Map<RVec>(beta.data(), m - 1));
      es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      theta = es.eigenvalues();
      S = es.eigenvectors();
    };

    for (Index j = 0; j < mmax; ++j) {
      kernels::spmv(H, V.col(j).data(), w.data(), opts.exec);
      ++matvecs;
      ++steps;
      alpha.push_back(V.col(j).dot(w));
      orthogonalize(Q, V, j + 1, w);
      const double b = w.norm();
      m = j + 1;
      const bool breakdown = b <= 1e-13 * hnorm;
      const bool last = m == mmax || matvecs >= opts.max_matvecs;
      if (m >= k && (breakdown || last || m <= 32 || m % 4 == 0)) {
        ritz();
        bool ok = true;
        for (int i = 0; i < k; ++i)
          if (b * std::abs(S(m - 1, i)) > tol) ok = false;
        if (ok || last) break;
      }
      if (last) break;
      if (breakdown) {
        RVec r = random_vector(n, ++stream * 0x9e3779b97f4a7c15ULL);
        orthogonalize(Q, V, j + 1, r);
        const double nr = r.norm();
        if (nr < 1e-8) break;  // space exhausted
        V.col(j + 1) = r / nr;
        beta.push_back(0.0);
      } else {
        V.col(j + 1) = w / b;
        beta.push_back(b);
      }
    }
    if (theta.size() != m) ritz();
    if (m < k) fail(ErrorCode::NoConvergence, "Krylov space smaller than k");

    RMat Y = V.leftCols(m) * S.leftCols(k);
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      kernels::spmv(H, Y.col(i).data(), w.data(), opts.exec);
      ++matvecs;
      if ((w - theta[i] * Y.col(i)).norm() > tol) ok = false;
    }
    out.values = theta.head(k);
    out.vectors = Y;
    if (ok || matvecs >= opts.max_matvecs) {
      out.converged = ok;
      break;
    }
    v = Y.rowwise().sum();
    v.normalize();
  }
  for (Index c = 0; c < out.vectors.cols(); ++c) out.vectors.col(c).normalize();
  return out;
}

}  // namespace

Spectrum dense_spectrum(const SpMat& H) {
  if (H.rows() != H.cols())
    fail(ErrorCode::DimensionMismatch, "Hamiltonian must be square");
  RMat D = RMat(H);
  Eigen::SelfAdjointEigenSolver<RMat> es(D);
  Spectrum s;
  s.values = es.eigenvalues();
  s.vectors = es.eigenvectors();
  for (Index c = 0; c < s.vectors.cols(); ++c) fix_sign(s.vectors.col(c));
  s.converged = true;
  return s;
}

Spectrum lanczos_lowest(const SpMat& H, int k, const RVec* start,
                        const LanczosOptions& opts) {
  const Index n = H.rows();
  if (H.cols() != n)
    fail(ErrorCode::DimensionMismatch, "Hamiltonian must be square");
  if (k < 1 || k > n)
    fail(ErrorCode::DimensionMismatch, "requested eigenpair count out of range");
  if (start && start->size() != n)
    fail(ErrorCode::DimensionMismatch, "warm start has the wrong dimension");
  if (start && (!(start->norm() > 0.0) || !std::isfinite(start->norm())))
    fail(ErrorCode::DimensionMismatch, "start vector has zero norm");

  if (n <= opts.dense_threshold) {
    Spectrum d = dense_spectrum(H);
    d.values = d.values.head(k).eval();
    d.vectors = d.vectors.leftCols(k).eval();
    return d;
  }

  const double hnorm = std::max(inf_norm(H), 1e-300);
  const double tol = opts.tol_rel * hnorm;
  std::uint64_t stream = opts.seed;
  int matvecs = 0, steps = 0;
  const RVec v0 = start ? *start : random_vector(n, opts.seed);
  KrylovRun run = krylov_run(H, k, v0, RMat(n, 0), opts, hnorm, stream,
                             matvecs, steps);
  Spectrum out;
  out.values = run.values;
  out.vectors = run.vectors;
  out.converged = run.converged;
  out.iterations = steps;

  // A single Krylov sequence sees each distinct eigenvalue once. For k > 1,
  // lock the current pairs and search their complement from fresh random
  // vectors until nothing below the k-th value turns up.
  if (k > 1 && out.converged) {
    bool settled = false;
    for (int round = 0; round <= k && !settled; ++round) {
      if (Index(k) >= n) {
        settled = true;
        break;
      }
      int probe_steps = 0;
      KrylovRun probe = krylov_run(
          H, 1, random_vector(n, ++stream * 0x9e3779b97f4a7c15ULL),
          out.vectors, opts, hnorm, stream, matvecs, probe_steps);
      if (!probe.converged) break;
      const double p = probe.values[0];
      if (!(p < out.values[k - 1] - tol)) {
        settled = true;
        break;
      }
      Index at = 0;
      while (at < k - 1 && out.values[at] <= p) ++at;
      for (Index c = k - 1; c > at; --c) {
        out.values[c] = out.values[c - 1];
        out.vectors.col(c) = out.vectors.col(c - 1);
      }
      out.values[at] = p;
      out.vectors.col(at) = probe.vectors.col(0);
    }
    out.converged = settled;
  }
  for (Index c = 0; c < out.vectors.cols(); ++c) fix_sign(out.vectors.col(c));
  out.matvecs = matvecs;
  return out;
}

GroundState ground_state(const SpMat& H, const RVec* warm_start,
                         const LanczosOptions& opts) {
  Spectrum s = lanczos_lowest(H, 1, warm_start, opts);
  GroundState g;
  g.energy = s.values[0];
  g.vector = s.vectors.col(0);
  g.converged = s.converged;
  g.iterations = s.iterations;
  g.matvecs = s.matvecs;
  RVec w(H.rows());
  kernels::spmv(H, g.vector.data(), w.data(), opts.exec);
  g.residual = (w - g.energy * g.vector).norm();
  return g;
}

Spectrum spectrum(const SpMat& H, int k, const LanczosOptions& opts) {
  if (k < 1 || k > H.rows())
    fail(ErrorCode::DimensionMismatch, "requested eigenpair count out of range");
  if (H.rows() <= 2048) {
    Spectrum d = dense_spectrum(H);
    d.values = d.values.head(k).eval();
    d.vectors = d.vectors.leftCols(k).eval();
    return d;
  }
  return lanczos_lowest(H, k, nullptr, opts);
}

std::optional<double> spectral_gap(const SpMat& H, const LanczosOptions& opts) {
  if (H.rows() < 2) return std::nullopt;
  Spectrum s = lanczos_lowest(H, 2, nullptr, opts);
  if (!s.converged) return std::nullopt;
  return std::max(0.0, s.values[1] - s.values[0]);
}

Grid<GroundState> sweep_ground_states(const ParametricHamiltonian& model,
                                      const ParameterLattice& lattice,
                                      const SweepOptions& opts) {
  lattice.validate();
  const std::size_t R = lattice.rows, C = lattice.cols;
  const std::size_t ci = opts.start_at_max_lambda2 ? R - 1 : 0;
  const std::size_t cj = opts.start_at_min_lambda1 ? 0 : C - 1;
  auto dist = [&](std::size_t i, std::size_t j) {
    return (i > ci ? i - ci : ci - i) + (j > cj ? j - cj : cj - j);
  };

  std::vector<std::vector<std::size_t>> levels(R + C - 1);
  for (std::size_t k = 0; k < R * C; ++k)
    levels[dist(k / C, k % C)].push_back(k);

  LanczosOptions lo = opts.lanczos;
  lo.exec = Exec::Serial;
  Grid<GroundState> out(R, C);

  for (std::size_t d = 0; d < levels.size(); ++d) {
    const auto& level = levels[d];
    const std::int64_t count = std::int64_t(level.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < count; ++t) {
      const std::size_t k = level[t];
      const std::size_t i = k / C, j = k % C;
      const RVec* warm = nullptr;
      if (d > 0) {
        std::size_t pred = R * C;
        auto consider = [&](std::int64_t ii, std::int64_t jj) {
          if (ii < 0 || jj < 0 || ii >= std::int64_t(R) || jj >= std::int64_t(C))
            return;
          if (dist(ii, jj) + 1 != d) return;
          pred = std::min(pred, std::size_t(ii) * C + std::size_t(jj));
        };
        consider(std::int64_t(i) - 1, j);
        consider(std::int64_t(i) + 1, j);
        consider(i, std::int64_t(j) - 1);
        consider(i, std::int64_t(j) + 1);
        warm = &out[pred].vector;
      }
      const auto [l1, l2] = lattice.point(i, j);
      SpMat H = model.assemble(l1, l2);
      GroundState g = ground_state(H, warm, lo);
      g.lambda1 = l1;
      g.lambda2 = l2;
      // A random-start solve doubles as a check on the warm start, which
      // cannot leave an invariant subspace such as a parity sector.
      if (opts.compute_gap || (warm && opts.verify_warm_start)) {
        const Spectrum s = lanczos_lowest(H, opts.compute_gap ? 2 : 1, nullptr, lo);
        g.matvecs += s.matvecs;
        if (s.converged) {
          if (opts.compute_gap) {
            g.gap = std::max(0.0, s.values[1] - s.values[0]);
            g.near_degenerate = *g.gap < opts.degeneracy_threshold;
          }
          const double tol = lo.tol_rel * inf_norm(H);
          if (s.values[0] < g.energy - 10.0 * tol || !g.converged) {
            g.energy = s.values[0];
            g.vector = s.vectors.col(0);
            g.converged = true;
            g.replaced_warm_start = true;
            RVec w(H.rows());
            kernels::spmv(H, g.vector.data(), w.data(), lo.exec);
            g.residual = (w - g.energy * g.vector).norm();
          }
        }
      }
      out[k] = std::move(g);
    }
  }
  return out;
}

}  // namespace rfs
