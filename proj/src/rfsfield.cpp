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

#include "rfs/rfsfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rfs/error.hpp"
#include "rfs/kernels.hpp"

namespace rfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_valid(const Grid<std::uint8_t>* valid, std::size_t k) {
  return valid == nullptr || (*valid)[k] != 0;
}

}  // namespace

EdgeFidelities edge_fidelities(const Grid<DensityMatrix>& rdms,
                               const Grid<std::uint8_t>* valid, Exec exec) {
  const std::size_t n = rdms.rows(), m = rdms.cols();
  if (n == 0 || m == 0) fail(ErrorCode::GridTooSmall, "empty RDM grid");
  if (valid && (valid->rows() != n || valid->cols() != m))
    fail(ErrorCode::DimensionMismatch, "mask shape differs from RDM grid");

  const Eigen::Index order = rdms[0].order();
  std::vector<CMat> roots(n * m);
  for (std::size_t k = 0; k < n * m; ++k)
    if (is_valid(valid, k) && rdms[k].order() != order)
      fail(ErrorCode::DimensionMismatch, "RDMs differ in order");

  const std::int64_t cells = std::int64_t(n * m);
  if (exec == Exec::Serial) {
    for (std::int64_t k = 0; k < cells; ++k)
      if (is_valid(valid, k)) roots[k] = psd_sqrt(rdms[k].matrix());
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < cells; ++k)
      if (is_valid(valid, k)) roots[k] = psd_sqrt(rdms[k].matrix());
  }

  EdgeFidelities e;
  e.horizontal = Grid<double>(n, m > 0 ? m - 1 : 0, kNaN);
  e.vertical = Grid<double>(n > 0 ? n - 1 : 0, m, kNaN);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double*> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const std::size_t a = i * m + j, b = a + 1;
      if (!is_valid(valid, a) || !is_valid(valid, b)) continue;
      pairs.emplace_back(a, b);
      slots.push_back(&e.horizontal(i, j));
    }
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t a = i * m + j, b = a + m;
      if (!is_valid(valid, a) || !is_valid(valid, b)) continue;
      pairs.emplace_back(a, b);
      slots.push_back(&e.vertical(i, j));
    }
  std::vector<double> f(pairs.size());
  kernels::root_fidelities(roots, pairs, f.data(), exec);
  for (std::size_t k = 0; k < f.size(); ++k) *slots[k] = f[k];
  return e;
}

Grid<double> rfs_grid(const EdgeFidelities& edges,
                      const Grid<std::uint8_t>* valid, double metric_scale) {
  const std::size_t n = edges.horizontal.rows();
  const std::size_t m = edges.vertical.cols();
  Grid<double> g(n, m, kNaN);
  auto term = [](double f) { return std::isfinite(f) ? f : 1.0; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (!is_valid(valid, i * m + j)) continue;
      double s = 0.0;
      s += j + 1 < m ? term(edges.horizontal(i, j)) : 1.0;
      s += j > 0 ? term(edges.horizontal(i, j - 1)) : 1.0;
      s += i + 1 < n ? term(edges.vertical(i, j)) : 1.0;
      s += i > 0 ? term(edges.vertical(i - 1, j)) : 1.0;
      double v = 4.0 - s;
      if (metric_scale > 0.0) v /= metric_scale;
      g(i, j) = v;
    }
  return g;
}

Grid<cplx> sobel_gradient(const Grid<double>& g, Exec exec) {
  if (g.rows() < 3 || g.cols() < 3)
    fail(ErrorCode::GridTooSmall, "Sobel needs at least a 3x3 grid");
  Grid<cplx> out(g.rows(), g.cols());
  kernels::sobel(g.data().data(), g.rows(), g.cols(), out.data().data(), exec);
  return out;
}

double principal_angle(cplx p) {
  if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return kNaN;
  if (p.real() == 0.0 && p.imag() == 0.0) return kNaN;
  double a = std::atan2(p.imag(), p.real());
  if (a <= -std::numbers::pi) a = std::numbers::pi;
  if (a == 0.0) a = 0.0;  // drop the sign of -0.0
  return a;
}

std::pair<Grid<cplx>, Grid<double>> vector_field(const Grid<double>& g,
                                                 Exec exec) {
  Grid<cplx> P = sobel_gradient(g, exec);
  Grid<double> angle(g.rows(), g.cols(), kNaN);
  for (std::size_t k = 0; k < P.size(); ++k) {
    P[k] = -P[k];
    if (!(std::abs(P[k]) > kFieldFloor)) continue;
    angle[k] = principal_angle(P[k]);
  }
  return {std::move(P), std::move(angle)};
}

RfsField build_field(const Grid<DensityMatrix>& rdms,
                     const Grid<std::uint8_t>& valid, Exec exec) {
  RfsField f;
  f.valid = valid;
  EdgeFidelities e = edge_fidelities(rdms, &valid, exec);
  f.g = rfs_grid(e, &valid);
  auto [P, angle] = vector_field(f.g, exec);
  f.P = std::move(P);
  f.angle = std::move(angle);
  return f;
}

Rgb angle_color(double theta) {
  if (!std::isfinite(theta)) return {0, 0, 0};
  const double hue = (theta + std::numbers::pi) / (2.0 * std::numbers::pi);
  const double h6 = hue * 6.0;
  const double fl = std::floor(h6);
  const int sector = int(fl) % 6;
  const double f = h6 - fl, q = 1.0 - f, t = f;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = 1; g = t; b = 0; break;
    case 1: r = q; g = 1; b = 0; break;
    case 2: r = 0; g = 1; b = t; break;
    case 3: r = 0; g = q; b = 1; break;
    case 4: r = t; g = 0; b = 1; break;
    default: r = 1; g = 0; b = q; break;
  }
  auto to8 = [](double c) {
    return std::uint8_t(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
  };
  return {to8(r), to8(g), to8(b)};
}

Grid<Rgb> cyclic_colormap(const Grid<double>& angle) {
  Grid<Rgb> out(angle.rows(), angle.cols());
  for (std::size_t k = 0; k < angle.size(); ++k) out[k] = angle_color(angle[k]);
  return out;
}

Grid<double> upsample2(const Grid<double>& g) {
  const std::size_t n = g.rows(), m = g.cols();
  if (n < 2 || m < 2) fail(ErrorCode::GridTooSmall, "upsample2 needs 2x2");
  Grid<double> out(2 * n - 1, 2 * m - 1);
  for (std::size_t i = 0; i < 2 * n - 1; ++i)
    for (std::size_t j = 0; j < 2 * m - 1; ++j) {
      const std::size_t i0 = i / 2, j0 = j / 2;
      const std::size_t i1 = i0 + (i % 2), j1 = j0 + (j % 2);
      out(i, j) = 0.25 * (g(i0, j0) + g(i0, j1) + g(i1, j0) + g(i1, j1));
    }
  return out;
}

Grid<double> upsample2_angle(const Grid<double>& angle) {
  Grid<double> c(angle.rows(), angle.cols()), s(angle.rows(), angle.cols());
  for (std::size_t k = 0; k < angle.size(); ++k) {
    c[k] = std::cos(angle[k]);
    s[k] = std::sin(angle[k]);
  }
  Grid<double> uc = upsample2(c), us = upsample2(s);
  Grid<double> out(uc.rows(), uc.cols());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = principal_angle(cplx(uc[k], us[k]));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> streamline_seeds(
    std::size_t rows, std::size_t cols, int ring_stride) {
  std::vector<std::pair<std::size_t, std::size_t>> seeds;
  if (rows == 0 || cols == 0) return seeds;
  const std::size_t stride = std::size_t(std::max(1, ring_stride));
  for (std::size_t r = 0; 2 * r < std::min(rows, cols); r += stride) {
    const std::size_t i0 = r, j0 = r, i1 = rows - 1 - r, j1 = cols - 1 - r;
    for (std::size_t j = j0; j <= j1; ++j) seeds.emplace_back(i0, j);
    for (std::size_t i = i0 + 1; i <= i1; ++i) seeds.emplace_back(i, j1);
    if (i1 > i0)
      for (std::size_t j = j1; j-- > j0;) seeds.emplace_back(i1, j);
    if (j1 > j0)
      for (std::size_t i = i1; i-- > i0 + 1;) seeds.emplace_back(i, j0);
  }
  return seeds;
}

namespace {

// Bilinear sample at index coordinates (x = column, y = row); NaN outside
// or next to an undefined cell.
cplx sample(const Grid<cplx>& P, double x, double y) {
  const double xmax = double(P.cols() - 1), ymax = double(P.rows() - 1);
  if (!(x >= 0.0 && y >= 0.0 && x <= xmax && y <= ymax)) return {kNaN, kNaN};
  const std::size_t j0 = std::min(std::size_t(x), P.cols() > 1 ? P.cols() - 2 : 0);
  const std::size_t i0 = std::min(std::size_t(y), P.rows() > 1 ? P.rows() - 2 : 0);
  const std::size_t j1 = std::min(j0 + 1, P.cols() - 1);
  const std::size_t i1 = std::min(i0 + 1, P.rows() - 1);
  const double fx = x - double(j0), fy = y - double(i0);
  return (1 - fx) * (1 - fy) * P(i0, j0) + fx * (1 - fy) * P(i0, j1) +
         (1 - fx) * fy * P(i1, j0) + fx * fy * P(i1, j1);
}

}  // namespace

std::vector<Polyline> streamlines(const Grid<cplx>& P,
                                  const ParameterLattice& lattice,
                                  const StreamlineOptions& opts) {
  const std::size_t n = P.rows(), m = P.cols();
  const int max_steps =
      opts.max_steps > 0 ? opts.max_steps : int(10 * std::max(n, m));
  const double h = opts.step_fraction;

  auto dir = [&](double x, double y, bool& ok) -> cplx {
    cplx p = sample(P, x, y);
    const double a = std::abs(p);
    if (!std::isfinite(a) || a < opts.min_speed) {
      ok = false;
      return {0, 0};
    }
    return p / a;
  };
  auto to_param = [&](double x, double y) {
    return std::make_pair(lattice.origin1 + x * lattice.step1,
                          lattice.origin2 + y * lattice.step2);
  };

  // One RK4 trajectory from (x, y); sign = -1 runs time backwards.
  auto trace = [&](double x, double y, double sign) {
    Polyline pts;
    for (int s = 0; s < max_steps; ++s) {
      bool ok = true;
      const double hs = sign * h;
      const cplx k1 = dir(x, y, ok);
      const cplx k2 = dir(x + 0.5 * hs * k1.real(), y + 0.5 * hs * k1.imag(), ok);
      const cplx k3 = dir(x + 0.5 * hs * k2.real(), y + 0.5 * hs * k2.imag(), ok);
      const cplx k4 = dir(x + hs * k3.real(), y + hs * k3.imag(), ok);
      if (!ok) break;
      const cplx d = (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (hs / 6.0);
      const double nx = x + d.real(), ny = y + d.imag();
      if (!(nx >= 0.0 && ny >= 0.0 && nx <= double(m - 1) &&
            ny <= double(n - 1)))
        break;
      x = nx;
      y = ny;
      pts.push_back(to_param(x, y));
    }
    return pts;
  };

  std::vector<Polyline> lines;
  for (auto [i, j] : streamline_seeds(n, m, opts.ring_stride)) {
    const double x = double(j), y = double(i);
    Polyline back = trace(x, y, -1.0);
    Polyline line(back.rbegin(), back.rend());
    line.push_back(to_param(x, y));
    for (auto& p : trace(x, y, 1.0)) line.push_back(p);
    lines.push_back(std::move(line));
  }
  return lines;
}

Grid<std::int64_t> descent_basins(const Grid<double>& g) {
  const std::size_t n = g.rows(), m = g.cols();
  std::vector<std::int64_t> next(n * m, -1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      if (!std::isfinite(g[k])) continue;
      std::size_t best = k;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const std::int64_t a = std::int64_t(i) + di, b = std::int64_t(j) + dj;
          if (a < 0 || b < 0 || a >= std::int64_t(n) || b >= std::int64_t(m))
            continue;
          const std::size_t q = std::size_t(a) * m + std::size_t(b);
          if (std::isfinite(g[q]) && g[q] < g[best]) best = q;
        }
      next[k] = std::int64_t(best);
    }
  Grid<std::int64_t> label(n, m, -1);
  for (std::size_t k = 0; k < n * m; ++k) {
    if (next[k] < 0) continue;
    std::size_t p = k;
    while (std::size_t(next[p]) != p) p = std::size_t(next[p]);
    label[k] = std::int64_t(p);
  }
  return label;
}

}  // namespace rfs
