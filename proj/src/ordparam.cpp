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

#include "rfs/ordparam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "rfs/error.hpp"
#include "rfs/kernels.hpp"

namespace rfs {

using Eigen::Index;

namespace {

constexpr double kIndefTol = 1e-10;

// Real orthonormal coordinates of a Hermitian matrix under Re tr(A^dagger B):
// diagonal entries, then sqrt(2) Re and sqrt(2) Im of the upper triangle.
RVec to_coords(const CMat& h) {
  const Index m = h.rows();
  RVec x(m * m);
  Index k = 0;
  for (Index i = 0; i < m; ++i) x[k++] = h(i, i).real();
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) {
      x[k++] = std::numbers::sqrt2 * h(i, j).real();
      x[k++] = std::numbers::sqrt2 * h(i, j).imag();
    }
  return x;
}

CMat from_coords(const RVec& x, Index m) {
  CMat h(m, m);
  Index k = 0;
  for (Index i = 0; i < m; ++i) h(i, i) = x[k++];
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) {
      const double re = x[k++] / std::numbers::sqrt2;
      const double im = x[k++] / std::numbers::sqrt2;
      h(i, j) = cplx(re, im);
      h(j, i) = cplx(re, -im);
    }
  return h;
}

struct Selection {
  std::vector<std::size_t> index;  // into rdms
  RVec weight;
};

Selection select(const std::vector<DensityMatrix>& rdms,
                 const PhaseLabels& labels) {
  if (labels.plus.empty() || labels.minus.empty())
    fail(ErrorCode::EmptyPhaseSet, "a phase index set is empty");
  Selection s;
  s.index.insert(s.index.end(), labels.plus.begin(), labels.plus.end());
  s.index.insert(s.index.end(), labels.minus.begin(), labels.minus.end());
  s.weight.resize(Index(s.index.size()));
  const double np = double(labels.plus.size()), nm = double(labels.minus.size());
  for (std::size_t t = 0; t < s.index.size(); ++t) {
    const auto& r = rdms.at(s.index[t]);
    const double p = purity(r);
    s.weight[Index(t)] = t < labels.plus.size() ? -1.0 / (np * p) : 1.0 / (nm * p);
  }
  return s;
}

// Spectrum of A restricted to what matters: eigenvalues (ascending) and a
// map from eigen-index to Hermitian coordinates of the eigenvector.
struct Reduced {
  RVec values;
  RMat coords;  // columns: unit coordinate vectors, aligned with values
  double a_min = 0.0, a_max = 0.0;
};

Reduced reduce(const RMat& X, const RVec& w, const RMat* G, bool vectors) {
  const Index dim = X.rows(), n = X.cols();
  Reduced r;
  const auto opt = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (dim <= n) {
    RMat At = X * w.asDiagonal() * X.transpose();
    Eigen::SelfAdjointEigenSolver<RMat> es(At, opt);
    r.values = es.eigenvalues();
    if (vectors) r.coords = es.eigenvectors();
    r.a_min = r.values[0];
    r.a_max = r.values[dim - 1];
    return r;
  }
  RMat Gl = G ? *G : RMat(X.transpose() * X);
  Eigen::SelfAdjointEigenSolver<RMat> eg(Gl);
  const RVec& sig = eg.eigenvalues();
  const double smax = std::max(sig.maxCoeff(), 1e-300);
  std::vector<Index> keep;
  for (Index k = 0; k < n; ++k)
    if (sig[k] > 1e-12 * smax) keep.push_back(k);
  const Index rank = Index(keep.size());
  RMat Ur(n, rank);
  RVec sq(rank);
  for (Index t = 0; t < rank; ++t) {
    Ur.col(t) = eg.eigenvectors().col(keep[t]);
    sq[t] = std::sqrt(sig[keep[t]]);
  }
  RMat T = sq.asDiagonal() * (Ur.transpose() * w.asDiagonal() * Ur) *
           sq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RMat> et(T, opt);
  r.values = et.eigenvalues();
  if (vectors)
    r.coords = X * Ur * sq.cwiseInverse().asDiagonal() * et.eigenvectors();
  r.a_min = r.values[0];
  r.a_max = r.values[rank - 1];
  if (rank < dim) {
    r.a_min = std::min(r.a_min, 0.0);
    r.a_max = std::max(r.a_max, 0.0);
  }
  return r;
}

RMat coords_of(const std::vector<DensityMatrix>& rdms,
               const std::vector<std::size_t>& idx) {
  const Index m = rdms.at(idx.front()).order();
  RMat X(m * m, Index(idx.size()));
  for (std::size_t t = 0; t < idx.size(); ++t) {
    if (rdms.at(idx[t]).order() != m)
      fail(ErrorCode::DimensionMismatch, "RDMs differ in order");
    X.col(Index(t)) = to_coords(rdms[idx[t]].matrix());
  }
  return X;
}

void fix_observable_sign(const std::vector<DensityMatrix>& rdms,
                         const PhaseLabels& labels, Observable& obs) {
  double mean = 0.0;
  for (auto i : labels.plus) mean += (rdms[i].matrix() * obs.M).trace().real();
  if (mean < 0.0) {
    obs.M = -obs.M;
    obs.sign_flipped = true;
  }
}

}  // namespace

PhaseLabels compute_labels(const std::vector<double>& angles, double eta,
                           double y_min) {
  PhaseLabels L;
  L.eta = eta;
  L.y_min = y_min;
  L.y.resize(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    L.y[i] = std::sin(angles[i] + eta);
    if (!std::isfinite(L.y[i])) continue;
    if (L.y[i] > y_min) L.plus.push_back(i);
    if (L.y[i] < -y_min) L.minus.push_back(i);
  }
  return L;
}

PhaseLabels label_phases(const std::vector<double>& angles, double eta,
                         double y_min) {
  PhaseLabels L = compute_labels(angles, eta, y_min);
  if (L.plus.empty() || L.minus.empty())
    fail(ErrorCode::EmptyPhaseSet, "labeling leaves a phase set empty");
  return L;
}

CMat build_A(const std::vector<DensityMatrix>& rdms, const PhaseLabels& labels) {
  Selection s = select(rdms, labels);
  const Index m = rdms.at(s.index.front()).order();
  CMat A = CMat::Zero(m * m, m * m);
  for (std::size_t t = 0; t < s.index.size(); ++t) {
    CVec r = vec(rdms[s.index[t]].matrix());
    A.noalias() += s.weight[Index(t)] * r * r.adjoint();
  }
  return A;
}

double qcqp_objective(const std::vector<DensityMatrix>& rdms,
                      const PhaseLabels& labels, const CMat& M) {
  Selection s = select(rdms, labels);
  double acc = 0.0;
  for (std::size_t t = 0; t < s.index.size(); ++t) {
    const double e = (rdms[s.index[t]].matrix() * M).trace().real();
    acc += s.weight[Index(t)] * e * e;
  }
  return acc;
}

Observable solve_order_parameter(const std::vector<DensityMatrix>& rdms,
                                 const PhaseLabels& labels) {
  Selection s = select(rdms, labels);
  const Index m = rdms.at(s.index.front()).order();
  RMat X = coords_of(rdms, s.index);
  RMat G;
  if (X.rows() > X.cols()) kernels::gram(X, G, Exec::Parallel);
  Reduced red = reduce(X, s.weight, X.rows() > X.cols() ? &G : nullptr, true);
  if (!(red.a_min < -kIndefTol && red.a_max > kIndefTol))
    fail(ErrorCode::NotIndefinite,
         "A is not indefinite: no observable separates the two phase sets");

  const double tol = kIndefTol * std::max(1.0, std::abs(red.a_min));
  std::vector<Index> space;
  for (Index k = 0; k < red.values.size(); ++k)
    if (red.values[k] <= red.a_min + tol) space.push_back(k);

  RVec x = red.coords.col(space.front());
  if (space.size() > 1) {
    // Pick the direction in the eigenspace closest to the identity.
    const RVec id = to_coords(CMat::Identity(m, m)) / std::sqrt(double(m));
    RVec comb = RVec::Zero(x.size());
    for (Index k : space) comb += red.coords.col(k).dot(id) * red.coords.col(k);
    if (comb.norm() > 1e-12) x = comb;
  }
  Observable obs;
  obs.M = from_coords(x / x.norm(), m);
  obs.M /= obs.M.norm();
  obs.a_min = red.a_min;
  obs.a_max = red.a_max;
  obs.null_dim = int(space.size());
  fix_observable_sign(rdms, labels, obs);
  obs.lambda_min = qcqp_objective(rdms, labels, obs.M);
  return obs;
}

Observable solve_order_parameter_full(const std::vector<DensityMatrix>& rdms,
                                      const PhaseLabels& labels,
                                      double* hermiticity_defect) {
  CMat A = build_A(rdms, labels);
  Eigen::SelfAdjointEigenSolver<CMat> es(A);
  const RVec& w = es.eigenvalues();
  if (!(w[0] < -kIndefTol && w[w.size() - 1] > kIndefTol))
    fail(ErrorCode::NotIndefinite, "A is not indefinite");
  CMat X = unvec(es.eigenvectors().col(0));
  // Remove the arbitrary global phase: sum_ij X_ij X_ji = e^{2i phi} ||H||^2.
  cplx s = (X.array() * X.transpose().array()).sum();
  X *= std::exp(cplx(0, -0.5 * std::arg(s)));
  if (hermiticity_defect) *hermiticity_defect = (X - X.adjoint()).norm();
  Observable obs;
  obs.M = 0.5 * (X + X.adjoint());
  obs.M /= obs.M.norm();
  obs.a_min = w[0];
  obs.a_max = w[w.size() - 1];
  const double tol = kIndefTol * std::max(1.0, std::abs(w[0]));
  obs.null_dim = 0;
  for (Index k = 0; k < w.size(); ++k)
    if (w[k] <= w[0] + tol) ++obs.null_dim;
  fix_observable_sign(rdms, labels, obs);
  obs.lambda_min = qcqp_objective(rdms, labels, obs.M);
  return obs;
}

EtaChoice select_eta(const std::vector<DensityMatrix>& rdms,
                     const std::vector<double>& angles, double y_min,
                     int grid) {
  if (rdms.size() != angles.size())
    fail(ErrorCode::DimensionMismatch, "one angle per RDM expected");
  std::vector<std::size_t> defined;
  for (std::size_t i = 0; i < angles.size(); ++i)
    if (std::isfinite(angles[i])) defined.push_back(i);
  if (defined.size() < 2)
    fail(ErrorCode::NoValidLabeling, "fewer than two defined angles");

  RMat Xall = coords_of(rdms, defined);
  std::vector<Index> pos(rdms.size(), -1);
  for (std::size_t t = 0; t < defined.size(); ++t) pos[defined[t]] = Index(t);
  std::vector<double> pur(rdms.size(), 0.0);
  for (auto i : defined) pur[i] = purity(rdms[i]);
  RMat Gall;
  const bool gram_route = Xall.rows() > Xall.cols();
  if (gram_route) kernels::gram(Xall, Gall, Exec::Parallel);

  bool found = false;
  EtaChoice best;
  double best_depth = 0.0, best_mean = 0.0;
  for (int t = 1; t <= grid; ++t) {
    const double eta = -std::numbers::pi + 2.0 * std::numbers::pi * t / grid;
    PhaseLabels L = compute_labels(angles, eta, y_min);
    if (L.plus.empty() || L.minus.empty()) continue;
    std::vector<Index> cols;
    RVec w(Index(L.plus.size() + L.minus.size()));
    Index c = 0;
    for (auto i : L.plus) {
      cols.push_back(pos[i]);
      w[c++] = -1.0 / (double(L.plus.size()) * pur[i]);
    }
    for (auto i : L.minus) {
      cols.push_back(pos[i]);
      w[c++] = 1.0 / (double(L.minus.size()) * pur[i]);
    }
    RMat X(Xall.rows(), Index(cols.size()));
    for (std::size_t q = 0; q < cols.size(); ++q) X.col(Index(q)) = Xall.col(cols[q]);
    Reduced red;
    if (X.rows() > X.cols()) {
      RMat G(Index(cols.size()), Index(cols.size()));
      for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
          G(Index(a), Index(b)) = gram_route ? Gall(cols[a], cols[b])
                                             : Xall.col(cols[a]).dot(Xall.col(cols[b]));
      red = reduce(X, w, &G, false);
    } else {
      red = reduce(X, w, nullptr, false);
    }
    const double margin = std::min(-red.a_min, red.a_max);
    const double depth = -red.a_min;
    double mean = 0.0;
    for (auto i : L.plus) mean += std::abs(L.y[i]);
    for (auto i : L.minus) mean += std::abs(L.y[i]);
    mean /= double(L.plus.size() + L.minus.size());

    const double eps = 1e-12;
    bool better = !found;
    if (found) {
      if (margin > best.margin + eps) better = true;
      else if (margin >= best.margin - eps) {
        if (depth > best_depth + eps) better = true;
        else if (depth >= best_depth - eps && mean > best_mean + eps) better = true;
      }
    }
    if (better) {
      found = true;
      best = {eta, margin, red.a_min, red.a_max};
      best_depth = depth;
      best_mean = mean;
    }
  }
  if (!found)
    fail(ErrorCode::NoValidLabeling, "every eta leaves a phase set empty");
  return best;
}

Observable solve_two_state(const DensityMatrix& plus,
                           const DensityMatrix& minus) {
  if (plus.order() != minus.order())
    fail(ErrorCode::DimensionMismatch, "density matrices differ in order");
  const CMat a = plus.matrix() / plus.matrix().norm();
  const CMat b = minus.matrix() / minus.matrix().norm();
  const double c = frobenius_inner(a, b).real();
  if (c > 1.0 - 1e-12)
    fail(ErrorCode::IdenticalStates, "the two states coincide");
  Observable obs;
  obs.M = (a - c * b) / std::sqrt(1.0 - c * c);
  obs.M = 0.5 * (obs.M + obs.M.adjoint());
  const double ep = (plus.matrix() * obs.M).trace().real();
  const double em = (minus.matrix() * obs.M).trace().real();
  obs.lambda_min = -ep * ep / purity(plus) + em * em / purity(minus);
  // The pair's A has eigenvalues +-sqrt(1 - c^2) on span{a, b}.
  obs.a_min = -std::sqrt(1.0 - c * c);
  obs.a_max = std::sqrt(1.0 - c * c);
  return obs;
}

CMat xi_apply(const CMat& K, const CMat& plus, const CMat& minus) {
  const double pp = frobenius_inner(plus, plus).real();
  const double mm = frobenius_inner(minus, minus).real();
  if (!(pp > 0.0) || !(mm > 0.0))
    fail(ErrorCode::DegenerateStates, "zero operand");
  return -frobenius_inner(K, plus).real() / pp * plus +
         frobenius_inner(K, minus).real() / mm * minus;
}

XiSvd xi_svd(const CMat& plus, const CMat& minus) {
  const CMat a = plus / plus.norm();
  const CMat b = minus / minus.norm();
  XiSvd s;
  s.c = frobenius_inner(a, b).real();
  if (s.c > 1.0 - 1e-12) fail(ErrorCode::DegenerateStates, "c = 1");
  s.s1 = s.s2 = std::sqrt(1.0 - s.c * s.c);
  s.V1 = a - s.c * b;
  s.U1 = -a;
  s.V2 = b;
  s.U2 = b - s.c * a;
  return s;
}

CMat xi_svd_apply(const XiSvd& svd, const CMat& K) {
  const CMat v1 = svd.V1 / svd.V1.norm();
  const CMat u2 = svd.U2 / svd.U2.norm();
  return svd.s1 * (frobenius_inner(K, v1).real() * svd.U1 +
                   frobenius_inner(K, svd.V2).real() * u2);
}

std::vector<EigenProjector> eigen_projectors(const CMat& M) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (M + M.adjoint()));
  std::vector<EigenProjector> out;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    CVec v = es.eigenvectors().col(k);
    Index p = 0;
    v.cwiseAbs().maxCoeff(&p);
    v *= std::conj(v[p]) / std::abs(v[p]);
    out.push_back({es.eigenvalues()[k], v, v * v.adjoint()});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenProjector& a, const EigenProjector& b) {
                     const double da = std::abs(a.alpha), db = std::abs(b.alpha);
                     if (std::abs(da - db) > 1e-12) return da > db;
                     return a.alpha > b.alpha;
                   });
  return out;
}

namespace {

// |<phi(theta)|v>|^2 with phi a real product state.
double product_overlap(const CVec& v, const std::vector<double>& th) {
  CVec w = v;
  for (double t : th) {
    const Index half = w.size() / 2;
    CVec next = std::cos(t) * w.head(half) + std::sin(t) * w.tail(half);
    w.swap(next);
  }
  return std::norm(w[0]);
}

double wrap_half(double t) {
  const double pi = std::numbers::pi;
  while (t > pi / 2) t -= pi;
  while (t <= -pi / 2) t += pi;
  return t;
}

}  // namespace

ProductFit fit_product_projector(const CMat& P) {
  if (P.rows() != P.cols()) fail(ErrorCode::NotRankOne, "not square");
  if (std::abs(P.trace() - cplx(1.0)) > 1e-8 || (P * P - P).norm() > 1e-8)
    fail(ErrorCode::NotRankOne, "input is not a rank-one projector");
  int k = 0;
  while ((Index{1} << k) < P.rows()) ++k;
  if ((Index{1} << k) != P.rows() || k < 1 || k > 3)
    fail(ErrorCode::InvalidSpec, "product fit supports 1 to 3 sites");

  Index c = 0;
  P.diagonal().real().maxCoeff(&c);
  const CVec v = P.col(c) / std::sqrt(P(c, c).real());

  const int npts = 257;
  const double step = std::numbers::pi / double(npts - 1);
  auto theta = [&](int t) { return -std::numbers::pi / 2 + step * t; };

  std::vector<int> idx(k, 0), best_idx(k, 0);
  double best = -1.0;
  std::vector<double> th(k);
  // Odometer over the k-dimensional grid, last site fastest.
  while (true) {
    for (int q = 0; q < k; ++q) th[q] = theta(idx[q]);
    const double f = product_overlap(v, th);
    if (f > best + 1e-15) {
      best = f;
      best_idx = idx;
    }
    int q = k - 1;
    while (q >= 0 && ++idx[q] == npts) idx[q--] = 0;
    if (q < 0) break;
  }
  std::vector<double> bt(k);
  for (int q = 0; q < k; ++q) bt[q] = theta(best_idx[q]);

  // One parabolic step per coordinate.
  for (int q = 0; q < k; ++q) {
    std::vector<double> lo = bt, hi = bt;
    lo[q] -= step;
    hi[q] += step;
    const double fm = product_overlap(v, lo), f0 = product_overlap(v, bt),
                 fp = product_overlap(v, hi);
    const double den = fm - 2.0 * f0 + fp;
    if (den < 0.0) {
      const double d = std::clamp(0.5 * step * (fm - fp) / den, -step, step);
      std::vector<double> trial = bt;
      trial[q] += d;
      const double ft = product_overlap(v, trial);
      if (ft > best) {
        best = ft;
        bt = trial;
      }
    }
  }
  ProductFit fit;
  for (double t : bt) fit.angles.push_back(wrap_half(t));
  fit.residual = std::clamp(1.0 - best, 0.0, 1.0);
  return fit;
}

namespace {

void apply_site(CVec& psi, int L, int site, const CMat& op) {
  const Index bit = Index{1} << (L - 1 - site);
  for (Index s = 0; s < psi.size(); ++s) {
    if (s & bit) continue;
    const cplx a = psi[s], b = psi[s | bit];
    psi[s] = op(0, 0) * a + op(0, 1) * b;
    psi[s | bit] = op(1, 0) * a + op(1, 1) * b;
  }
}

}  // namespace

double sop_expectation(const CVec& psi, int L, int j, int k,
                       const std::vector<CMat>& middle, const CMat& left,
                       const CMat& right) {
  if (psi.size() != (Index{1} << L))
    fail(ErrorCode::DimensionMismatch, "state size is not 2^L");
  if (j < 0 || k >= L || j >= k)
    fail(ErrorCode::IndexOutOfRange, "need 0 <= j < k < L");
  if (middle.size() != std::size_t(k - j - 1) && middle.size() != 1)
    fail(ErrorCode::DimensionMismatch, "one middle operator per site expected");
  CVec phi = psi;
  apply_site(phi, L, k, right);
  for (int i = j + 1; i < k; ++i)
    apply_site(phi, L, i, middle.size() == 1 ? middle[0] : middle[i - j - 1]);
  apply_site(phi, L, j, left);
  return psi.dot(phi).real();
}

double sop_expectation(const RVec& psi, int L, int j, int k,
                       const std::vector<CMat>& middle, const CMat& left,
                       const CMat& right) {
  return sop_expectation(CVec(psi.cast<cplx>()), L, j, k, middle, left, right);
}

}  // namespace rfs
