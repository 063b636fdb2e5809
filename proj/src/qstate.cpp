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

#include "rfs/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfs/eigensolver.hpp"
#include "rfs/error.hpp"
#include "rfs/kernels.hpp"

namespace rfs {

using Eigen::Index;

DensityMatrix::DensityMatrix(const CMat& m, int first_site, int num_sites)
    : first_(first_site) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorCode::DimensionMismatch, "density matrix must be square");
  m_ = 0.5 * (m + m.adjoint());
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    fail(ErrorCode::DomainError, "density matrix trace differs from 1");
  if (num_sites < 0) {
    num_sites = 0;
    while ((Index{1} << num_sites) < m_.rows()) ++num_sites;
  }
  sites_ = num_sites;
}

int centered_window(int L, int k) {
  if (k < 1 || k > L) fail(ErrorCode::IndexOutOfRange, "window does not fit");
  return (L - k) / 2;
}

namespace {

template <typename V>
CMat trace_out(const V& psi, int L, int first, int count) {
  if (psi.size() != (Index{1} << L))
    fail(ErrorCode::DimensionMismatch, "state size is not 2^L");
  if (count < 1 || first < 0 || first + count > L)
    fail(ErrorCode::IndexOutOfRange, "site window out of range");
  const Index left = Index{1} << first;
  const Index keep = Index{1} << count;
  const Index right = Index{1} << (L - first - count);
  using Scalar = typename V::Scalar;
  using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rho =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(keep, keep);
  for (Index a = 0; a < left; ++a) {
    Eigen::Map<const Block> blk(psi.data() + a * keep * right, keep, right);
    rho.noalias() += blk * blk.adjoint();
  }
  return rho.template cast<cplx>();
}

}  // namespace

DensityMatrix partial_trace(const RVec& psi, int L, int first, int count) {
  return DensityMatrix(trace_out(psi, L, first, count), first, count);
}

DensityMatrix partial_trace(const CVec& psi, int L, int first, int count) {
  return DensityMatrix(trace_out(psi, L, first, count), first, count);
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

CMat psd_sqrt(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  RVec w = es.eigenvalues();
  if (w.size() && w.minCoeff() < -1e-8)
    fail(ErrorCode::NotPSD, "matrix has a negative eigenvalue");
  // Eigenvalues within the solver's backward error of zero are zero; their
  // square roots would otherwise inject O(sqrt(eps)) noise.
  const double floor = w.size() ? 8.0 * double(w.size()) * kEps * w.cwiseAbs().maxCoeff() : 0.0;
  RVec r = w.unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().adjoint();
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.order() != sigma.order())
    fail(ErrorCode::DimensionMismatch, "density matrices differ in order");
  if (rho.matrix() == sigma.matrix()) {
    psd_sqrt(rho.matrix());  // still enforce the PSD precondition
    return 1.0;
  }
  const double f = kernels::root_fidelity(psd_sqrt(rho.matrix()),
                                          psd_sqrt(sigma.matrix()));
  return f * f;
}

double bures_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 2.0 * (1.0 - std::sqrt(uhlmann_fidelity(rho, sigma)));
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

CVec vec(const CMat& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::DimensionMismatch, "vec expects a square matrix");
  const Index n = m.rows();
  CVec v(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) v[i * n + j] = m(i, j);
  return v;
}

CMat unvec(const CVec& v) {
  const Index n = Index(std::llround(std::sqrt(double(v.size()))));
  if (n * n != v.size())
    fail(ErrorCode::DimensionMismatch, "vector length is not a square");
  CMat m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  return m;
}

cplx frobenius_inner(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::DimensionMismatch, "operands differ in shape");
  return (a.adjoint() * b).trace();
}

CMat pauli_matrix(const std::string& label) {
  CMat p = CMat::Identity(1, 1);
  for (char c : label) {
    CMat s(2, 2);
    switch (c) {
      case 'I': s << 1, 0, 0, 1; break;
      case 'X': s << 0, 1, 1, 0; break;
      case 'Y': s << 0, cplx(0, -1), cplx(0, 1), 0; break;
      case 'Z': s << 1, 0, 0, -1; break;
      default: fail(ErrorCode::InvalidSpec, "bad Pauli label");
    }
    CMat next(p.rows() * 2, p.cols() * 2);
    for (Index i = 0; i < p.rows(); ++i)
      for (Index j = 0; j < p.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = p(i, j) * s;
    p = next;
  }
  return p;
}

std::vector<PauliTerm> pauli_decompose(const CMat& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::DimensionMismatch, "square matrix expected");
  int k = 0;
  while ((Index{1} << k) < m.rows()) ++k;
  if ((Index{1} << k) != m.rows())
    fail(ErrorCode::DimensionMismatch, "order must be a power of two");
  const Index dim = m.rows();
  const Index nlabels = Index{1} << (2 * k);
  static const char kSym[4] = {'I', 'X', 'Y', 'Z'};

  std::vector<PauliTerm> terms;
  for (Index code = 0; code < nlabels; ++code) {
    std::string label(k, 'I');
    Index flip = 0;
    for (int q = 0; q < k; ++q) {
      const int s = int((code >> (2 * (k - 1 - q))) & 3);
      label[q] = kSym[s];
      if (s == 1 || s == 2) flip |= Index{1} << (k - 1 - q);
    }
    // tr(P M) = sum_t phase(t) M(t, t ^ flip), with P|t> = phase(t)|t ^ flip>.
    cplx acc = 0.0;
    for (Index t = 0; t < dim; ++t) {
      cplx ph = 1.0;
      for (int q = 0; q < k; ++q) {
        const bool one = (t >> (k - 1 - q)) & 1;
        if (label[q] == 'Z' && one) ph = -ph;
        if (label[q] == 'Y') ph *= one ? cplx(0, -1) : cplx(0, 1);
      }
      acc += ph * m(t, t ^ flip);
    }
    const double c = acc.real() / double(dim);
    if (std::abs(c) >= 1e-12) terms.push_back({label, c});
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const PauliTerm& a, const PauliTerm& b) {
                     return std::abs(a.coeff) > std::abs(b.coeff);
                   });
  return terms;
}

double spectral_susceptibility(const SpMat& H, const SpMat& driver) {
  if (driver.rows() != H.rows())
    fail(ErrorCode::DimensionMismatch, "driver dimension differs");
  Spectrum s = dense_spectrum(H);
  if (s.values.size() < 2) return 0.0;
  if (s.values[1] - s.values[0] < 1e-8)
    fail(ErrorCode::DegenerateGroundState, "ground state is degenerate");
  RVec hv = RMat(driver) * s.vectors.col(0);
  RVec me = s.vectors.transpose() * hv;
  double chi = 0.0;
  for (Index k = 1; k < s.values.size(); ++k) {
    const double gap = s.values[k] - s.values[0];
    chi += me[k] * me[k] / (gap * gap);
  }
  return chi;
}

double spectral_susceptibility(const ParametricHamiltonian& model, double l1,
                               double l2, int which) {
  return spectral_susceptibility(model.assemble(l1, l2),
                                 which == 1 ? model.h1 : model.h2);
}

namespace {

RVec nondegenerate_ground(const SpMat& H) {
  Spectrum s = dense_spectrum(H);
  if (s.values.size() > 1 && s.values[1] - s.values[0] < 1e-8)
    fail(ErrorCode::DegenerateGroundState, "ground state is degenerate");
  return s.vectors.col(0);
}

}  // namespace

double overlap_susceptibility_fd(const SpMat& Ha, const SpMat& Hb,
                                 double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::DomainError, "delta must be positive");
  RVec a = nondegenerate_ground(Ha);
  RVec b = nondegenerate_ground(Hb);
  Index k = 0;
  a.cwiseProduct(b).cwiseAbs().maxCoeff(&k);
  if (a[k] * b[k] < 0) b = -b;
  const double ov = std::min(1.0, std::abs(a.dot(b)));
  return -2.0 * std::log(ov) / (delta * delta);
}

double overlap_susceptibility_fd(const ParametricHamiltonian& model, double l1,
                                 double l2, int which, double delta) {
  const double b1 = which == 1 ? l1 + delta : l1;
  const double b2 = which == 1 ? l2 : l2 + delta;
  return overlap_susceptibility_fd(model.assemble(l1, l2),
                                   model.assemble(b1, b2), delta);
}

}  // namespace rfs
