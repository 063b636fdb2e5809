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

#include "rfs/fss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "rfs/error.hpp"
#include "rfs/qstate.hpp"

namespace rfs {

using Eigen::Index;

FssDataset observable_sweep(const CMat& M, const ModelSpec& base, double kappa,
                            const std::vector<double>& h_values,
                            const std::vector<int>& lengths,
                            const LanczosOptions& opts) {
  int k = 0;
  while ((Index{1} << k) < M.rows()) ++k;
  if ((Index{1} << k) != M.rows() || M.rows() != M.cols())
    fail(ErrorCode::DimensionMismatch, "observable order must be 2^k");
  if (h_values.empty() || lengths.empty())
    fail(ErrorCode::TooFewPoints, "empty h or L list");

  FssDataset d;
  d.kappa = kappa;
  d.lengths = lengths;
  d.h_values = h_values;
  d.curves.assign(lengths.size(), std::vector<double>(h_values.size()));

  std::vector<std::size_t> order(h_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return h_values[a] > h_values[b];
  });

  LanczosOptions lo = opts;
  lo.exec = Exec::Serial;
  const std::int64_t nl = std::int64_t(lengths.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t l = 0; l < nl; ++l) {
    ModelSpec spec = base;
    spec.sites = lengths[l];
    ParametricHamiltonian H = build_model(spec);
    const int first = centered_window(spec.sites, k);
    RVec prev;
    for (std::size_t t : order) {
      SpMat h = H.assemble(kappa, h_values[t]);
      GroundState g = ground_state(h, prev.size() ? &prev : nullptr, lo);
      DensityMatrix rho = partial_trace(g.vector, spec.sites, first, k);
      d.curves[l][t] = (rho.matrix() * M).trace().real();
      prev = g.vector;
    }
  }
  return d;
}

GradientMax max_gradient(const std::vector<double>& h,
                         const std::vector<double>& y) {
  const std::size_t n = h.size();
  if (n < 3 || y.size() != n)
    fail(ErrorCode::TooFewPoints, "max_gradient needs >= 3 matching points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(h[i] > h[i - 1]))
      fail(ErrorCode::DomainError, "h values must increase strictly");
  GradientMax best{h[0], -1.0};
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0) d = (y[1] - y[0]) / (h[1] - h[0]);
    else if (i == n - 1) d = (y[n - 1] - y[n - 2]) / (h[n - 1] - h[n - 2]);
    else d = (y[i + 1] - y[i - 1]) / (h[i + 1] - h[i - 1]);
    if (std::abs(d) > best.value) best = {h[i], std::abs(d)};
  }
  return best;
}

namespace {

struct LinFit {
  double slope, intercept, sse;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) fail(ErrorCode::SingularFit, "all lengths are equal");
  LinFit f{sxy / sxx, 0.0, 0.0};
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.sse += r * r;
  }
  return f;
}

// Log-space residuals of log a + u log L + log(1 + b L^-phi) - log G, with
// any subset of (log a, u, b, phi) held fixed.
struct CorrectionFunctor : Eigen::DenseFunctor<double> {
  std::vector<double> logL, logG;
  std::array<double, 4> base{};
  std::array<int, 4> slot{};  // parameter -> free index, or -1

  CorrectionFunctor(std::vector<double> lL, std::vector<double> lG,
                    std::array<double, 4> b, std::array<bool, 4> free)
      : Eigen::DenseFunctor<double>(
            int(std::count(free.begin(), free.end(), true)), int(lL.size())),
        logL(std::move(lL)), logG(std::move(lG)), base(b) {
    int k = 0;
    for (int p = 0; p < 4; ++p) slot[p] = free[p] ? k++ : -1;
  }

  std::array<double, 4> params(const Eigen::VectorXd& x) const {
    std::array<double, 4> p = base;
    for (int q = 0; q < 4; ++q)
      if (slot[q] >= 0) p[q] = x[slot[q]];
    return p;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const auto p = params(x);
    for (std::size_t i = 0; i < logL.size(); ++i) {
      const double c = 1.0 + p[2] * std::exp(-p[3] * logL[i]);
      fvec[Index(i)] = p[0] + p[1] * logL[i] +
                       (c > 0 ? std::log(c) : -1e3) - logG[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
    const auto p = params(x);
    J.setZero(Index(logL.size()), x.size());
    for (std::size_t i = 0; i < logL.size(); ++i) {
      const double e = std::exp(-p[3] * logL[i]);
      const double c = 1.0 + p[2] * e;
      const double d[4] = {1.0, logL[i], e / c, -p[2] * logL[i] * e / c};
      for (int q = 0; q < 4; ++q)
        if (slot[q] >= 0) J(Index(i), slot[q]) = d[q];
    }
    return 0;
  }
};

std::array<double, 4> refine(const std::vector<double>& logL,
                             const std::vector<double>& logG,
                             std::array<double, 4> start,
                             std::array<bool, 4> free) {
  CorrectionFunctor f(logL, logG, start, free);
  Eigen::VectorXd x(f.inputs());
  for (int q = 0; q < 4; ++q)
    if (f.slot[q] >= 0) x[f.slot[q]] = start[q];
  Eigen::LevenbergMarquardt<CorrectionFunctor> lm(f);
  lm.setMaxfev(4000);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  lm.minimize(x);
  return f.params(x);
}

double sse_of(const std::vector<double>& logL, const std::vector<double>& logG,
              const std::array<double, 4>& p) {
  double s = 0;
  for (std::size_t i = 0; i < logL.size(); ++i) {
    const double c = 1.0 + p[2] * std::exp(-p[3] * logL[i]);
    if (!(c > 0)) return std::numeric_limits<double>::infinity();
    const double r = p[0] + p[1] * logL[i] + std::log(c) - logG[i];
    s += r * r;
  }
  return s;
}

}  // namespace

FssFit fit_fss(const std::vector<double>& lengths,
               const std::vector<double>& G) {
  if (lengths.size() != G.size())
    fail(ErrorCode::DimensionMismatch, "one gradient per length expected");
  std::set<double> distinct(lengths.begin(), lengths.end());
  if (distinct.size() < 2)
    fail(ErrorCode::SingularFit, "need at least two distinct lengths");
  std::vector<double> logL, logG;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0) || !(G[i] > 0))
      fail(ErrorCode::DomainError, "lengths and gradients must be positive");
    logL.push_back(std::log(lengths[i]));
    logG.push_back(std::log(G[i]));
  }
  const LinFit s1 = linear_fit(logL, logG);

  FssFit fit;
  fit.stage1_slope = s1.slope;
  std::array<double, 4> p = {s1.intercept, s1.slope, 0.0, 1.0};

  const double scale = 1e-24 * double(logG.size());
  if (s1.sse > scale && distinct.size() >= 3) {
    if (distinct.size() >= 5) {
      // Seed the joint fit: for each (u, phi), G / L^u = c1 + c2 L^-phi is
      // linear in (c1, c2); fit it with relative weights.
      double best = std::numeric_limits<double>::infinity();
      for (int iu = -150; iu <= 150; ++iu) {
        const double u = s1.slope + 0.01 * iu;
        for (int ip = 1; ip <= 200; ++ip) {
          const double phi = 0.02 * ip;
          Eigen::Matrix2d N = Eigen::Matrix2d::Zero();
          Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
          for (std::size_t i = 0; i < logL.size(); ++i) {
            const double y = std::exp(logG[i] - u * logL[i]);
            const Eigen::Vector2d a(1.0 / y, std::exp(-phi * logL[i]) / y);
            N += a * a.transpose();
            rhs += a;
          }
          const Eigen::Vector2d c = N.ldlt().solve(rhs);
          if (!(c[0] > 0)) continue;
          const std::array<double, 4> q = {std::log(c[0]), u, c[1] / c[0], phi};
          const double e = sse_of(logL, logG, q);
          if (e < best) {
            best = e;
            p = q;
          }
        }
      }
      p = refine(logL, logG, p, {true, true, true, true});
      fit.joint = true;
    } else {
      // Leading exponent fixed from stage 1; a'' normalized on the largest L.
      const std::size_t imax = std::size_t(
          std::max_element(lengths.begin(), lengths.end()) - lengths.begin());
      p[0] = logG[imax] - s1.slope * logL[imax];
      p = refine(logL, logG, {p[0], s1.slope, 0.1, 0.5},
                 {false, false, true, true});
    }
  }
  fit.slope = p[1];
  fit.nu_estimate = 1.0 / p[1];
  fit.a_scale = std::exp(p[0]);
  fit.b_double_prime = p[2];
  fit.theta = p[2] == 0.0 ? 0.0 : p[3] / p[1];
  double ss = 0;
  for (std::size_t i = 0; i < logL.size(); ++i) {
    const double c = 1.0 + p[2] * std::exp(-p[3] * logL[i]);
    const double r = p[0] + p[1] * logL[i] + std::log(c) - logG[i];
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

double fit_beta(const std::vector<double>& lengths,
                const std::vector<double>& values, double nu) {
  if (lengths.size() != values.size())
    fail(ErrorCode::DimensionMismatch, "one value per length expected");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    x.push_back(std::log(lengths[i]));
    y.push_back(std::log(std::abs(values[i])));
  }
  return -linear_fit(x, y).slope * nu;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                   double x) {
  if (xs.size() != ys.size() || xs.empty())
    fail(ErrorCode::DimensionMismatch, "bad curve");
  if (xs.size() == 1) return ys[0];
  std::size_t i = 1;
  while (i + 1 < xs.size() && xs[i] < x) ++i;
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

}  // namespace rfs
