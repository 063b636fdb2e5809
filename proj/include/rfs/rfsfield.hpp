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

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "rfs/lattice.hpp"
#include "rfs/qstate.hpp"
#include "rfs/types.hpp"

namespace rfs {

/// sqrt(F) on lattice edges. horizontal(i, j) joins (i, j)-(i, j+1),
/// vertical(i, j) joins (i, j)-(i+1, j). NaN marks an edge touching an
/// invalid point.
struct EdgeFidelities {
  Grid<double> horizontal;  // n x (m-1)
  Grid<double> vertical;    // (n-1) x m
  std::size_t unique_edges() const {
    return horizontal.size() + vertical.size();
  }
};

/// Angles are NaN where undefined (P = 0 or an invalid neighborhood).
struct RfsField {
  Grid<double> g;
  Grid<cplx> P;
  Grid<double> angle;
  Grid<std::uint8_t> valid;
};

using Rgb = std::array<std::uint8_t, 3>;

EdgeFidelities edge_fidelities(const Grid<DensityMatrix>& rdms,
                               const Grid<std::uint8_t>* valid = nullptr,
                               Exec exec = Exec::Parallel);

/// 4 - (sum of incident f), missing edges counted as f = 1. Multiplied by
/// 1/h^2 when `metric_scale` > 0 (pass h^2).
Grid<double> rfs_grid(const EdgeFidelities& edges,
                      const Grid<std::uint8_t>* valid = nullptr,
                      double metric_scale = 0.0);

/// Real part ~ dg/dlambda1 (along columns), imaginary ~ dg/dlambda2.
Grid<cplx> sobel_gradient(const Grid<double>& g, Exec exec = Exec::Parallel);

/// Principal argument in (-pi, pi]; NaN for P = 0 or non-finite P.
double principal_angle(cplx p);

/// |P| at or below this is treated as zero: g is assembled from fidelities
/// accurate to a few ulps, so smaller gradients are rounding noise.
inline constexpr double kFieldFloor = 1e-12;

/// P = -sobel(g) and its angle; the angle is NaN where |P| <= kFieldFloor.
std::pair<Grid<cplx>, Grid<double>> vector_field(const Grid<double>& g,
                                                 Exec exec = Exec::Parallel);

RfsField build_field(const Grid<DensityMatrix>& rdms,
                     const Grid<std::uint8_t>& valid,
                     Exec exec = Exec::Parallel);

/// HSV hue (theta + pi) / 2pi at S = V = 1; black for undefined angles.
Rgb angle_color(double theta);
Grid<Rgb> cyclic_colormap(const Grid<double>& angle);

/// Bilinear, (2n-1) x (2m-1).
Grid<double> upsample2(const Grid<double>& g);
/// Circular variant for angle grids: interpolates unit vectors.
Grid<double> upsample2_angle(const Grid<double>& angle);

using Polyline = std::vector<std::pair<double, double>>;

struct StreamlineOptions {
  double step_fraction = 0.25;  // arc step in units of the lattice spacing
  double min_speed = 1e-12;
  int max_steps = 0;            // 0 -> 10 * max(n, m)
  int ring_stride = 2;          // seed every other ring
};

/// Seed points in (row, col) lattice units: the boundary ring, then every
/// `ring_stride`-th ring inwards.
std::vector<std::pair<std::size_t, std::size_t>> streamline_seeds(
    std::size_t rows, std::size_t cols, int ring_stride = 2);

/// RK4 on the unit direction field P/|P| with bilinear interpolation, run
/// forwards and backwards from each seed; points are ordered along the flow.
/// Polylines are returned in parameter coordinates (lambda1, lambda2).
std::vector<Polyline> streamlines(const Grid<cplx>& P,
                                  const ParameterLattice& lattice,
                                  const StreamlineOptions& opts = {});

/// Steepest-descent basins of g over the 8-neighborhood. Each cell is
/// labelled with the row-major index of the local minimum it drains to;
/// NaN cells get -1.
Grid<std::int64_t> descent_basins(const Grid<double>& g);

}  // namespace rfs
