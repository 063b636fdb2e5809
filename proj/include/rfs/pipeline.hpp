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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfs/eigensolver.hpp"
#include "rfs/fss.hpp"
#include "rfs/lattice.hpp"
#include "rfs/models.hpp"
#include "rfs/ordparam.hpp"
#include "rfs/rfsfield.hpp"

namespace rfs {

/// Axis-aligned box in parameter space, inclusive.
struct Region {
  std::array<double, 2> lambda1{0.0, 1.0};
  std::array<double, 2> lambda2{0.0, 1.0};
  bool contains(double l1, double l2) const {
    return l1 >= lambda1[0] && l1 <= lambda1[1] && l2 >= lambda2[0] &&
           l2 <= lambda2[1];
  }
};

struct FssConfig {
  double kappa = 0.0;
  std::vector<double> h_values;
  std::vector<int> lengths;
  std::optional<CMat> observable;
  std::optional<double> h_c;
  // Synthetic mode: G(L) = a L^(1/nu) (1 + b L^(-theta/nu)), no diagonalization.
  bool synthetic = false;
  double a = 1.0, b = 1.0, theta = 0.5, nu = 1.0;
  std::vector<double> max_gradients;  // explicit G(L), overrides synthetic
};

struct RunConfig {
  ModelSpec model;
  Region region;
  std::size_t grid = 8;
  int rdm_sites = 2;
  int observable_sites = 2;
  std::optional<double> eta;  // nullopt = automatic
  double y_min = 0.1;
  std::optional<Region> sample_region;
  LanczosOptions lanczos;
  bool compute_gap = true;
  std::string output = "out";
  int threads = 0;  // 0 = automatic
  std::optional<CMat> rho_plus, rho_minus;
  std::optional<FssConfig> fss;
  nlohmann::json raw;

  ParameterLattice lattice() const;
};

/// Parses and validates a config. Throws ConfigError (schema) or
/// InvalidSpec / UnsupportedSize (model).
RunConfig parse_config(const nlohmann::json& j);

struct DiagramData {
  ParameterLattice lattice;
  Grid<std::uint8_t> valid;
  Grid<std::uint8_t> near_degenerate;
  Grid<double> energy;
  std::map<int, Grid<DensityMatrix>> rdms;  // centered k-site windows
  RfsField field;
  int field_sites = 2;
  std::size_t invalid_points = 0;
};

/// One warm-started sweep; RDMs for `field_sites` and every extra window.
DiagramData compute_diagram(const ModelSpec& model,
                            const ParameterLattice& lattice,
                            const SweepOptions& opts, int field_sites,
                            const std::vector<int>& extra_windows = {});

struct OrderParamResult {
  std::vector<std::size_t> samples;  // row-major lattice indices
  std::optional<EtaChoice> eta_choice;
  PhaseLabels labels;
  Observable observable;
};

/// Labels the (optionally filtered) valid points by the field angle and
/// solves for the observable on the `window`-site RDMs.
OrderParamResult discover_order_parameter(const DiagramData& d, int window,
                                          std::optional<double> eta,
                                          double y_min,
                                          const std::optional<Region>& sample);

struct FssResult {
  FssDataset data;
  std::vector<double> h_star;
  std::vector<double> max_gradients;
  FssFit fit;
};

FssResult run_fss(const FssConfig& cfg, const ModelSpec& model,
                  const LanczosOptions& opts);

}  // namespace rfs
