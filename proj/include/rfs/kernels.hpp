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

#include <utility>
#include <vector>

#include "rfs/types.hpp"

// Hot loops. Every kernel has a serial reference and an OpenMP variant
// that must agree bit-for-bit: work is split per output element and no
// floating-point reduction crosses a thread boundary.
namespace rfs::kernels {

/// y = A x for a CSR matrix.
void spmv(const SpMat& A, const double* x, double* y, Exec exec);

/// min(1, || a b ||_*), or exactly 1 when a == b.
double root_fidelity(const CMat& a, const CMat& b);

/// out[e] = min(1, || S_a S_b ||_*) for every pair e = (a, b). With S the
/// matrix square roots of two density matrices this is sqrt(F).
void root_fidelities(const std::vector<CMat>& roots,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                     double* out, Exec exec);

/// 3x3 correlation of a row-major grid. Real part uses b(2-|a|), imaginary
/// part a(2-|b|), for row offset a and column offset b. Cells outside the
/// grid read as 0; NaN inputs propagate.
void sobel(const double* g, std::size_t rows, std::size_t cols, cplx* out,
           Exec exec);

/// G(i, j) = <x_i, x_j> for the columns of X.
void gram(const RMat& X, RMat& G, Exec exec);

}  // namespace rfs::kernels
