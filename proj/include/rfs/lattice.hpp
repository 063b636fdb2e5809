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

#include <cstddef>
#include <utility>

namespace rfs {

/// Rectangular parameter lattice. Column j moves along lambda1, row i along
/// lambda2: point(i, j) = origin + (j * step1, i * step2).
struct ParameterLattice {
  double origin1 = 0.0;
  double origin2 = 0.0;
  double step1 = 1.0;
  double step2 = 1.0;
  std::size_t rows = 3;
  std::size_t cols = 3;

  static ParameterLattice square(double o1, double o2, double h,
                                 std::size_t rows, std::size_t cols) {
    return {o1, o2, h, h, rows, cols};
  }
  /// n points per axis spanning [a1, b1] x [a2, b2] inclusive.
  static ParameterLattice region(double a1, double b1, double a2, double b2,
                                 std::size_t n) {
    return {a1, a2, (b1 - a1) / double(n - 1), (b2 - a2) / double(n - 1), n,
            n};
  }

  double lambda1(std::size_t j) const { return origin1 + double(j) * step1; }
  double lambda2(std::size_t i) const { return origin2 + double(i) * step2; }
  std::pair<double, double> point(std::size_t i, std::size_t j) const {
    return {lambda1(j), lambda2(i)};
  }
  std::size_t size() const { return rows * cols; }
  void validate() const;
};

}  // namespace rfs
