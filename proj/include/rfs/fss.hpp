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

#include <optional>
#include <vector>

#include "rfs/eigensolver.hpp"
#include "rfs/models.hpp"
#include "rfs/types.hpp"

namespace rfs {

struct FssDataset {
  double kappa = 0.0;
  std::vector<int> lengths;
  std::vector<double> h_values;
  std::vector<std::vector<double>> curves;  // curves[l][h]
};

/// <M> = tr(rho_L(kappa, h) M) on the centered window of M's size, for
/// every L and h. Each L is a warm-started sweep from the largest h down.
FssDataset observable_sweep(const CMat& M, const ModelSpec& base, double kappa,
                            const std::vector<double>& h_values,
                            const std::vector<int>& lengths,
                            const LanczosOptions& opts = {});

struct GradientMax {
  double h_star = 0.0;
  double value = 0.0;
};

/// Central differences inside, two-point one-sided at the ends; maximum of
/// |d<M>/dh|, leftmost on ties.
GradientMax max_gradient(const std::vector<double>& h,
                         const std::vector<double>& y);

struct FssFit {
  double stage1_slope = 0.0;  // plain log-log slope
  double slope = 0.0;         // 1/nu after the correction fit
  double nu_estimate = 0.0;
  double a_scale = 1.0;       // a'' before normalization
  double b_double_prime = 0.0;
  double theta = 0.0;
  std::optional<double> beta;
  std::vector<double> residuals;  // log-space, one per length
  double residual_norm = 0.0;
  bool joint = false;             // joint (u, phi) refinement used
};

/// Fits G(L) = a'' L^{1/nu} (1 + b'' L^{-theta/nu}).
FssFit fit_fss(const std::vector<double>& lengths,
               const std::vector<double>& max_gradients);

/// beta from |<M>(h_c)| ~ L^{-beta/nu}.
double fit_beta(const std::vector<double>& lengths,
                const std::vector<double>& values, double nu);

/// Linear interpolation of a curve at x.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                   double x);

}  // namespace rfs
