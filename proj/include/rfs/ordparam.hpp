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

#include "rfs/qstate.hpp"
#include "rfs/types.hpp"

namespace rfs {

struct PhaseLabels {
  double eta = 0.0;
  double y_min = 0.1;
  std::vector<double> y;             // sin(p_i + eta), NaN if p_i undefined
  std::vector<std::size_t> plus;     // y > y_min
  std::vector<std::size_t> minus;    // y < -y_min
};

/// Labels without the emptiness check; label_phases adds it.
PhaseLabels compute_labels(const std::vector<double>& angles, double eta,
                           double y_min);
PhaseLabels label_phases(const std::vector<double>& angles, double eta,
                         double y_min = 0.1);

struct Observable {
  CMat M;                    // Hermitian, unit Frobenius norm
  double lambda_min = 0.0;   // attained objective
  double a_min = 0.0;        // lambda_min(A)
  double a_max = 0.0;        // lambda_max(A)
  int null_dim = 1;
  bool sign_flipped = false;
};

/// A = -(1/|I+|) sum r r^dagger / p + (1/|I-|) sum r r^dagger / p on vec
/// space (order m^2). Reference route, practical for small m only.
CMat build_A(const std::vector<DensityMatrix>& rdms, const PhaseLabels& labels);

/// vec(M)^dagger A vec(M), evaluated without forming A.
double qcqp_objective(const std::vector<DensityMatrix>& rdms,
                      const PhaseLabels& labels, const CMat& M);

/// Minimum-eigenvector solution of the QCQP. Throws EmptyPhaseSet or
/// NotIndefinite.
Observable solve_order_parameter(const std::vector<DensityMatrix>& rdms,
                                 const PhaseLabels& labels);

/// Same problem solved through the full vec-space A.
Observable solve_order_parameter_full(const std::vector<DensityMatrix>& rdms,
                                      const PhaseLabels& labels,
                                      double* hermiticity_defect = nullptr);

struct EtaChoice {
  double eta = 0.0;
  double margin = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
};

/// 64-point grid over (-pi, pi]. Maximizes min(-lambda_min, lambda_max);
/// ties go to the larger depth -lambda_min, then to the larger mean |y|
/// over labelled samples, then to the smaller eta.
EtaChoice select_eta(const std::vector<DensityMatrix>& rdms,
                     const std::vector<double>& angles, double y_min = 0.1,
                     int grid = 64);

Observable solve_two_state(const DensityMatrix& plus, const DensityMatrix& minus);

CMat xi_apply(const CMat& K, const CMat& plus, const CMat& minus);

struct XiSvd {
  double c = 0.0;
  double s1 = 0.0, s2 = 0.0;
  CMat V1, V2, U1, U2;  // unnormalized
};

XiSvd xi_svd(const CMat& plus, const CMat& minus);

/// s * (<K, V1^> U1 + <K, V2> U2^).
CMat xi_svd_apply(const XiSvd& svd, const CMat& K);

struct EigenProjector {
  double alpha;
  CVec vector;
  CMat projector;
};

/// Sorted by decreasing |alpha|, ties by decreasing alpha.
std::vector<EigenProjector> eigen_projectors(const CMat& M);

struct ProductFit {
  std::vector<double> angles;  // theta_q in (-pi/2, pi/2]
  double residual = 1.0;       // 1 - max overlap
};

/// Best product state prod_q (cos t_q |0> + sin t_q |1>) for a rank-one
/// projector on k <= 3 sites.
ProductFit fit_product_projector(const CMat& projector);

/// <psi| O_L(j) prod_{i=j+1}^{k-1} middle[i-j-1] O_R(k) |psi>, 0-based sites.
double sop_expectation(const CVec& psi, int L, int j, int k,
                       const std::vector<CMat>& middle, const CMat& left,
                       const CMat& right);
double sop_expectation(const RVec& psi, int L, int j, int k,
                       const std::vector<CMat>& middle, const CMat& left,
                       const CMat& right);

}  // namespace rfs
