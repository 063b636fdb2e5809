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

#include <cstdint>
#include <optional>

#include "rfs/lattice.hpp"
#include "rfs/models.hpp"
#include "rfs/types.hpp"

namespace rfs {

struct LanczosOptions {
  double tol_rel = 1e-10;       // residual tolerance relative to ||H||
  int max_matvecs = 2000;
  int krylov_max = 160;         // basis size before a restart
  int dense_threshold = 64;     // dense diagonalization at or below this
  std::uint64_t seed = 0x5eed5eedULL;
  Exec exec = Exec::Serial;
};

struct GroundState {
  double lambda1 = 0.0, lambda2 = 0.0;
  double energy = 0.0;
  RVec vector;
  std::optional<double> gap;
  bool converged = false;
  bool near_degenerate = false;
  int iterations = 0;  // Lanczos steps
  int matvecs = 0;
  // Set by the sweep when the random-start check found a lower state than
  // the warm-started solve.
  bool replaced_warm_start = false;
  double residual = 0.0;
};

struct Spectrum {
  RVec values;
  RMat vectors;
  bool converged = false;
  int iterations = 0;
  int matvecs = 0;
};

/// Lowest k eigenpairs by Lanczos with full reorthogonalization, starting
/// from `start` (or a seeded random vector). For k > 1 the pairs are locked
/// and their complement is searched again from random vectors, so repeated
/// eigenvalues are returned with their multiplicity. Returns the best
/// iterate with converged=false when the matvec budget runs out.
Spectrum lanczos_lowest(const SpMat& H, int k, const RVec* start,
                        const LanczosOptions& opts);

GroundState ground_state(const SpMat& H, const RVec* warm_start,
                         const LanczosOptions& opts = {});

/// k lowest eigenpairs; dense for small dimensions.
Spectrum spectrum(const SpMat& H, int k, const LanczosOptions& opts = {});

/// Full dense eigendecomposition, the oracle path for small systems.
Spectrum dense_spectrum(const SpMat& H);

/// E1 - E0 from an independent random-start run, so that a warm start
/// confined to one symmetry sector cannot hide a degeneracy.
std::optional<double> spectral_gap(const SpMat& H, const LanczosOptions& opts);

struct SweepOptions {
  LanczosOptions lanczos;
  bool compute_gap = true;
  // Without compute_gap, still run a random-start k = 1 solve per warm-
  // started point and keep it when it is lower.
  bool verify_warm_start = true;
  double degeneracy_threshold = 1e-8;
  // Corner where the sweep starts; default is maximal lambda2, minimal
  // lambda1 (row rows-1, column 0).
  bool start_at_max_lambda2 = true;
  bool start_at_min_lambda1 = true;
};

/// Warm-started sweep. The random-start solve (k = 2 with compute_gap, else
/// k = 1 when verify_warm_start) replaces the warm-started result when it
/// finds a lower energy. Points are processed in wavefronts of equal
/// Manhattan distance from the start corner; each point starts from its
/// already-solved neighbor with the smallest row-major index, so results do
/// not depend on the number of threads.
Grid<GroundState> sweep_ground_states(const ParametricHamiltonian& model,
                                      const ParameterLattice& lattice,
                                      const SweepOptions& opts = {});

}  // namespace rfs
