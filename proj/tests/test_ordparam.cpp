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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "rfs/error.hpp"
#include "rfs/ordparam.hpp"
#include "rfs/random.hpp"

using namespace rfs;

namespace {

constexpr double pi = std::numbers::pi;

int code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return int(e.code());
  }
  return -1;
}

// Two clusters of states around two random centres, with angles near pi/2
// and -pi/2 so that eta = 0 labels them.
struct Sample {
  std::vector<DensityMatrix> rdms;
  std::vector<double> angles;
};

Sample clustered(RandomMatrices& rng, Eigen::Index m, int per_phase) {
  const CMat c1 = rng.density(m), c2 = rng.density(m);
  Sample s;
  for (int t = 0; t < 2 * per_phase; ++t) {
    const bool plus = t % 2 == 0;
    const CMat mix = 0.8 * (plus ? c1 : c2) + 0.2 * rng.density(m);
    s.rdms.emplace_back(mix);
    s.angles.push_back((plus ? 1 : -1) * (pi / 2 + 0.3 * (rng.uniform() - 0.5)));
  }
  return s;
}

// Brute-force value of the objective over the unit Hermitian sphere.
double objective_dense(const CMat& A, const CMat& M) {
  const CVec v = vec(M);
  return (v.adjoint() * A * v)(0, 0).real();
}

}  // namespace

TEST_CASE("phase labels") {
  const std::vector<double> angles{pi / 2, -pi / 2, 0.0, NAN, 0.05};
  const PhaseLabels L = label_phases(angles, 0.0, 0.1);
  CHECK(L.plus == std::vector<std::size_t>{0});
  CHECK(L.minus == std::vector<std::size_t>{1});
  CHECK(std::isnan(L.y[3]));
  CHECK(L.y[4] == doctest::Approx(std::sin(0.05)));
  // Shifting eta by pi swaps the sets.
  const PhaseLabels R = label_phases(angles, pi, 0.1);
  CHECK(R.plus == std::vector<std::size_t>{1});
  CHECK(R.minus == std::vector<std::size_t>{0});
  CHECK(code_of([&] { label_phases({0.5, 0.6}, 0.0); }) == int(ErrorCode::EmptyPhaseSet));
  CHECK(compute_labels({0.5, 0.6}, 0.0, 0.1).minus.empty());
}

TEST_CASE("objective without A matches the vec-space form") {
  RandomMatrices rng(11);
  const Sample s = clustered(rng, 4, 3);
  const PhaseLabels L = label_phases(s.angles, 0.0);
  const CMat A = build_A(s.rdms, L);
  CHECK((A - A.adjoint()).norm() < 1e-12);
  for (int t = 0; t < 5; ++t) {
    const CMat M = rng.unit_hermitian(4);
    CHECK(qcqp_objective(s.rdms, L, M) == doctest::Approx(objective_dense(A, M)).epsilon(1e-10));
  }
}

TEST_CASE("reduced solver agrees with the full A route") {
  RandomMatrices rng(12);
  // Few samples on 2 sites (Gram route) and many on 1 site (direct route).
  for (auto [m, per] : {std::pair<Eigen::Index, int>{4, 4}, {2, 12}}) {
    const Sample s = clustered(rng, m, per);
    const PhaseLabels L = label_phases(s.angles, 0.0);
    const Observable fast = solve_order_parameter(s.rdms, L);
    double defect = 1.0;
    const Observable full = solve_order_parameter_full(s.rdms, L, &defect);
    CHECK(defect < 1e-8);
    CHECK(fast.a_min == doctest::Approx(full.a_min).epsilon(1e-9));
    CHECK(fast.a_max == doctest::Approx(full.a_max).epsilon(1e-9));
    CHECK(fast.lambda_min == doctest::Approx(fast.a_min).epsilon(1e-9));
    CHECK(fast.null_dim == 1);
    CHECK((fast.M - full.M).norm() < 1e-6);
    CHECK(fast.M.norm() == doctest::Approx(1.0));
    CHECK((fast.M - fast.M.adjoint()).norm() < 1e-14);
    // Sign convention: the plus phase has positive mean expectation.
    double mean = 0.0;
    for (auto i : L.plus) mean += (s.rdms[i].matrix() * fast.M).trace().real();
    CHECK(mean > 0.0);
    // No sampled unit observable does better.
    const CMat A = build_A(s.rdms, L);
    for (int t = 0; t < 2000; ++t)
      CHECK(objective_dense(A, rng.unit_hermitian(m)) >= fast.lambda_min - 1e-12);
  }
}

TEST_CASE("identical phases are not separable") {
  RandomMatrices rng(13);
  const CMat rho = rng.density(4);
  const std::vector<DensityMatrix> rdms{DensityMatrix(rho), DensityMatrix(rho),
                                        DensityMatrix(rho)};
  const PhaseLabels L = label_phases({pi / 2, -pi / 2, pi / 2}, 0.0);
  CHECK(code_of([&] { solve_order_parameter(rdms, L); }) == int(ErrorCode::NotIndefinite));
  CHECK(code_of([&] { solve_order_parameter_full(rdms, L); }) == int(ErrorCode::NotIndefinite));
}

TEST_CASE("eta selection matches an exhaustive dense scan") {
  RandomMatrices rng(14);
  Sample s = clustered(rng, 2, 6);
  for (auto& a : s.angles) a += 0.7;  // move the optimum away from eta = 0
  const EtaChoice e = select_eta(s.rdms, s.angles, 0.1, 64);

  double best_margin = -1.0, best_depth = 0.0, best_mean = 0.0, best_eta = 0.0;
  for (int t = 1; t <= 64; ++t) {
    const double eta = -pi + 2.0 * pi * t / 64;
    const PhaseLabels L = compute_labels(s.angles, eta, 0.1);
    if (L.plus.empty() || L.minus.empty()) continue;
    Eigen::SelfAdjointEigenSolver<CMat> es(build_A(s.rdms, L));
    const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[es.eigenvalues().size() - 1];
    const double margin = std::min(-lo, hi);
    double mean = 0.0;
    for (auto i : L.plus) mean += std::abs(L.y[i]);
    for (auto i : L.minus) mean += std::abs(L.y[i]);
    mean /= double(L.plus.size() + L.minus.size());
    const bool better =
        margin > best_margin + 1e-9 ||
        (margin > best_margin - 1e-9 &&
         (-lo > best_depth + 1e-9 || (-lo > best_depth - 1e-9 && mean > best_mean + 1e-12)));
    if (better) {
      best_margin = margin;
      best_depth = -lo;
      best_mean = mean;
      best_eta = eta;
    }
  }
  CHECK(e.eta == doctest::Approx(best_eta));
  CHECK(e.margin == doctest::Approx(best_margin).epsilon(1e-8));
  CHECK(e.margin > 0.0);

  std::vector<double> undefined(s.angles.size(), NAN);
  undefined[0] = 0.3;
  CHECK(code_of([&] { select_eta(s.rdms, undefined); }) == int(ErrorCode::NoValidLabeling));
}

TEST_CASE("eta for angle clusters at 0 and pi") {
  // One state per cluster: every labelling that separates the clusters has
  // the same A, so the margin ties and the mean |y| decides.
  RandomMatrices rng(15);
  const CMat a = rng.density(2), b = rng.density(2);
  const std::vector<double> offsets{-0.1, 0.1, 0.05, -0.05, 0.1, -0.1, 0.0, 0.02};
  std::vector<DensityMatrix> rdms;
  std::vector<double> angles;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    rdms.emplace_back(i % 2 == 0 ? a : b);
    angles.push_back((i % 2 == 0 ? 0.0 : pi) + offsets[i]);
  }
  const EtaChoice e = select_eta(rdms, angles, 0.1, 64);
  // The two mirror choices +-pi/2 tie; the smaller one is reported.
  CHECK(std::abs(std::sin(e.eta)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.eta == doctest::Approx(-pi / 2));
}

TEST_CASE("two-state observable") {
  RandomMatrices rng(15);
  const DensityMatrix p(rng.density(4)), q(rng.density(4));
  const Observable o = solve_two_state(p, q);
  CHECK(o.M.norm() == doctest::Approx(1.0));
  CHECK(std::abs((q.matrix() * o.M).trace().real()) < 1e-12);
  CHECK((p.matrix() * o.M).trace().real() > 0.0);
  // Against the pair's vec-space A.
  PhaseLabels L;
  L.plus = {0};
  L.minus = {1};
  Eigen::SelfAdjointEigenSolver<CMat> es(build_A({p, q}, L));
  CHECK(o.a_min == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-10));
  CHECK(o.a_max == doctest::Approx(es.eigenvalues()[15]).epsilon(1e-10));
  CHECK(o.lambda_min == doctest::Approx(qcqp_objective({p, q}, L, o.M)).epsilon(1e-10));
  CHECK(o.lambda_min >= o.a_min - 1e-12);
  CHECK(code_of([&] { solve_two_state(p, p); }) == int(ErrorCode::IdenticalStates));
  CHECK(code_of([&] { solve_two_state(p, DensityMatrix(rng.density(2))); }) ==
        int(ErrorCode::DimensionMismatch));
}

TEST_CASE("Xi map and its singular value form agree") {
  RandomMatrices rng(16);
  const CMat a = rng.density(4), b = rng.density(4);
  const XiSvd svd = xi_svd(a, b);
  const double c = frobenius_inner(a, b).real() / (a.norm() * b.norm());
  CHECK(svd.c == doctest::Approx(c));
  CHECK(svd.s1 == doctest::Approx(std::sqrt(1 - c * c)));
  for (int t = 0; t < 10; ++t) {
    const CMat K = rng.unit_hermitian(4);
    CHECK((xi_svd_apply(svd, K) - xi_apply(K, a, b)).norm() < 1e-12);
  }
  CHECK(code_of([&] { xi_svd(a, 2.0 * a); }) == int(ErrorCode::DegenerateStates));
  CHECK(code_of([&] { xi_apply(a, CMat::Zero(4, 4), b); }) == int(ErrorCode::DegenerateStates));
}

TEST_CASE("eigen projectors reconstruct the observable") {
  RandomMatrices rng(17);
  const CMat M = rng.unit_hermitian(8);
  const auto ps = eigen_projectors(M);
  REQUIRE(ps.size() == 8);
  CMat sum = CMat::Zero(8, 8);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    sum += ps[k].alpha * ps[k].projector;
    CHECK((ps[k].projector * ps[k].projector - ps[k].projector).norm() < 1e-12);
    if (k > 0) CHECK(std::abs(ps[k].alpha) <= std::abs(ps[k - 1].alpha) + 1e-12);
    Eigen::Index p = 0;
    ps[k].vector.cwiseAbs().maxCoeff(&p);
    CHECK(std::abs(ps[k].vector[p].imag()) < 1e-14);
    CHECK(ps[k].vector[p].real() > 0.0);
  }
  CHECK((sum - M).norm() < 1e-12);
  // Equal magnitudes: positive eigenvalue first.
  const auto z = eigen_projectors(oracle::sz().cast<cplx>());
  CHECK(z[0].alpha == 1.0);
  CHECK(z[1].alpha == -1.0);
}

TEST_CASE("product-state fit") {
  const std::vector<double> th{0.3, -0.7, 1.1};
  CVec v = CVec::Ones(1);
  for (double t : th) {
    CVec site(2);
    site << std::cos(t), std::sin(t);
    CVec next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(2 * i, 2) = v[i] * site;
    v = next;
  }
  const ProductFit fit = fit_product_projector(v * v.adjoint());
  CHECK(fit.residual < 1e-8);
  for (int q = 0; q < 3; ++q) CHECK(fit.angles[q] == doctest::Approx(th[q]).epsilon(1e-4));

  // A Bell state overlaps at most 1/2 with any product state.
  CVec bell = CVec::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  CHECK(fit_product_projector(bell * bell.adjoint()).residual == doctest::Approx(0.5).epsilon(1e-6));

  CHECK(code_of([&] { fit_product_projector(CMat::Identity(4, 4) / 2.0); }) ==
        int(ErrorCode::NotRankOne));
  CVec big = CVec::Zero(16);
  big[0] = 1.0;
  CHECK(code_of([&] { fit_product_projector(big * big.adjoint()); }) == int(ErrorCode::InvalidSpec));
}

TEST_CASE("string-order expectation against dense operators") {
  RandomMatrices rng(18);
  const int L = 5;
  RVec psi(1 << L);
  for (auto& x : psi) x = rng.normal();
  psi.normalize();
  // X_1 Z_2 Z_3 X_4 (0-based sites 1..4).
  const RMat op = oracle::chain({oracle::id2(), oracle::sx(), oracle::sz(), oracle::sz(), oracle::sx()});
  const double want = psi.dot(op * psi);
  const CMat X = oracle::sx().cast<cplx>(), Z = oracle::sz().cast<cplx>();
  CHECK(sop_expectation(psi, L, 1, 4, {Z, Z}, X, X) == doctest::Approx(want).epsilon(1e-12));
  CHECK(sop_expectation(psi, L, 1, 4, {Z}, X, X) == doctest::Approx(want).epsilon(1e-12));
  CHECK(code_of([&] { sop_expectation(psi, L, 3, 1, {Z}, X, X); }) == int(ErrorCode::IndexOutOfRange));
  CHECK(code_of([&] { sop_expectation(RVec(RVec::Ones(8)), L, 0, 1, {}, X, X); }) ==
        int(ErrorCode::DimensionMismatch));
}
