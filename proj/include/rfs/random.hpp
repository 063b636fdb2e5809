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
#include <random>

#include "rfs/types.hpp"

namespace rfs {

/// Seeded source of random states and operators for tests and validation.
class RandomMatrices {
 public:
  explicit RandomMatrices(std::uint64_t seed) : eng_(seed) {}

  double normal() { return normal_(eng_); }
  double uniform() { return uniform_(eng_); }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }

  CMat ginibre(Eigen::Index rows, Eigen::Index cols) {
    CMat g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cplx(normal(), normal());
    return g;
  }

  /// G G^dagger / tr, G of size m x rank (rank <= 0 means full).
  CMat density(Eigen::Index m, Eigen::Index rank = 0) {
    const CMat g = ginibre(m, rank > 0 ? rank : m);
    CMat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
  }

  CVec state(Eigen::Index dim) {
    CVec v = ginibre(dim, 1).col(0);
    return v / v.norm();
  }

  /// Hermitian with unit Frobenius norm.
  CMat unit_hermitian(Eigen::Index m) {
    const CMat g = ginibre(m, m);
    CMat h = g + g.adjoint();
    return h / h.norm();
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

}  // namespace rfs
