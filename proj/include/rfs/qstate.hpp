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

#include <string>
#include <vector>

#include "rfs/models.hpp"
#include "rfs/types.hpp"

namespace rfs {

/// Hermitian, trace-one matrix on a window of `num_sites` sites starting at
/// `first_site` (0-based). The constructor symmetrizes its input.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const CMat& m, int first_site = 0, int num_sites = -1);

  const CMat& matrix() const { return m_; }
  Eigen::Index order() const { return m_.rows(); }
  int first_site() const { return first_; }
  int num_sites() const { return sites_; }

 private:
  CMat m_;
  int first_ = 0;
  int sites_ = 0;
};

/// First (0-based) site of the centered k-site window on an L-site chain.
/// For k = 2 this gives the 1-based sites {L/2, L/2 + 1}.
int centered_window(int L, int k);

DensityMatrix partial_trace(const RVec& psi, int L, int first, int count);
DensityMatrix partial_trace(const CVec& psi, int L, int first, int count);

/// Square root of a PSD Hermitian matrix by eigendecomposition. Eigenvalues
/// below -1e-8 raise NotPSD; those within 8 m eps of zero (relative to the
/// largest) are clipped to 0.
CMat psd_sqrt(const CMat& m);

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma);
double purity(const DensityMatrix& rho);

/// Row-major stacking: vec(M)[i * m + j] = M(i, j).
CVec vec(const CMat& m);
CMat unvec(const CVec& v);
/// <A, B> = tr(A^dagger B).
cplx frobenius_inner(const CMat& a, const CMat& b);

struct PauliTerm {
  std::string label;
  double coeff;
};

/// Pauli string as a matrix; the first character acts on the most
/// significant qubit.
CMat pauli_matrix(const std::string& label);

/// c_P = tr(P M) / 2^k, dropping |c_P| < 1e-12, sorted by decreasing |c_P|.
std::vector<PauliTerm> pauli_decompose(const CMat& m);

/// Sum over n > 0 of |<n|H_I|0>|^2 / (E_n - E_0)^2 from the full dense spectrum of H.
double spectral_susceptibility(const SpMat& H, const SpMat& driver);
/// Same, with H = model(l1, l2) and driver model.h1 (which = 1) or h2.
double spectral_susceptibility(const ParametricHamiltonian& model, double l1,
                               double l2, int which);

/// -2 ln |<psi0(a)|psi0(b)>| / delta^2 for two Hamiltonians a step apart.
double overlap_susceptibility_fd(const SpMat& Ha, const SpMat& Hb,
                                 double delta);
double overlap_susceptibility_fd(const ParametricHamiltonian& model, double l1,
                                 double l2, int which, double delta);

}  // namespace rfs
