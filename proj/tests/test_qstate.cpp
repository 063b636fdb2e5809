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

#include "oracle.hpp"
#include "rfs/error.hpp"
#include "rfs/qstate.hpp"
#include "rfs/random.hpp"

using namespace rfs;

namespace {

CMat ket_bra(const CVec& v) { return v * v.adjoint(); }

CVec basis(int dim, int k) {
  CVec v = CVec::Zero(dim);
  v[k] = 1.0;
  return v;
}

const double s2 = std::sqrt(0.5);

}  // namespace

TEST_CASE("partial trace examples") {
  // |00>, keep site 1.
  CHECK((partial_trace(CVec(basis(4, 0)), 2, 0, 1).matrix() - ket_bra(basis(2, 0))).norm() <
        1e-15);
  // Bell state.
  CVec bell = CVec::Zero(4);
  bell[0] = bell[3] = s2;
  CHECK((partial_trace(bell, 2, 0, 1).matrix() - 0.5 * CMat::Identity(2, 2)).norm() < 1e-15);
  // GHZ on three sites, keep the middle one.
  CVec ghz = CVec::Zero(8);
  ghz[0] = ghz[7] = s2;
  const DensityMatrix r = partial_trace(ghz, 3, 1, 1);
  CHECK((r.matrix() - 0.5 * CMat::Identity(2, 2)).norm() < 1e-15);
  CHECK(r.first_site() == 1);
  CHECK(r.num_sites() == 1);
}

TEST_CASE("partial trace matches explicit index sums") {
  RandomMatrices rng(11);
  for (int L : {3, 5, 7})
    for (int first = 0; first < L; ++first)
      for (int count = 1; first + count <= L && count <= 3; ++count) {
        const CVec psi = rng.state(Eigen::Index(1) << L);
        const CMat want = oracle::reduce(psi, L, first, count);
        CHECK((partial_trace(psi, L, first, count).matrix() - want).norm() < 1e-13);
        const RVec re = psi.real() / psi.real().norm();
        const CMat want_r = oracle::reduce(re.cast<cplx>(), L, first, count);
        CHECK((partial_trace(re, L, first, count).matrix() - want_r).norm() < 1e-13);
      }
  CHECK_THROWS_AS(partial_trace(rng.state(8), 3, 2, 2), Error);
  CHECK_THROWS_AS(partial_trace(rng.state(8), 3, 0, 0), Error);
  CHECK_THROWS_AS(partial_trace(rng.state(8), 4, 0, 1), Error);
}

TEST_CASE("centered windows") {
  // 2-site window is sites {L/2, L/2 + 1} in 1-based numbering.
  for (int L : {4, 8, 12}) CHECK(centered_window(L, 2) + 1 == L / 2);
  CHECK(centered_window(12, 1) == 5);
  CHECK(centered_window(12, 4) == 4);
  CHECK(centered_window(12, 5) == 3);
}

TEST_CASE("density matrix construction") {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = 0.7;
  m(1, 1) = 0.3;
  m(0, 1) = cplx(0.1, 0.2);
  m(1, 0) = cplx(0.1, -0.2 + 1e-13);
  const DensityMatrix d(m);
  CHECK((d.matrix() - d.matrix().adjoint()).norm() == 0.0);
  CMat bad = m;
  bad(0, 0) = 0.8;
  CHECK_THROWS_AS(DensityMatrix{bad}, Error);
}

TEST_CASE("matrix square root") {
  RandomMatrices rng(12);
  const CMat rho = rng.density(8, 3);
  const CMat r = psd_sqrt(rho);
  CHECK((r * r - rho).norm() < 1e-12);
  CMat neg = CMat::Identity(2, 2);
  neg(1, 1) = -1e-6;
  CHECK_THROWS_AS(psd_sqrt(neg), Error);
  neg(1, 1) = -1e-11;
  CHECK(std::isfinite(psd_sqrt(neg).norm()));
}

TEST_CASE("fidelity examples") {
  const CVec z = basis(2, 0);
  CVec plus(2);
  plus << s2, s2;
  const DensityMatrix r0(ket_bra(z)), rp(ket_bra(plus)), mixed(0.5 * CMat::Identity(2, 2));
  CHECK(uhlmann_fidelity(r0, r0) == 1.0);
  CHECK(uhlmann_fidelity(r0, rp) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uhlmann_fidelity(mixed, r0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uhlmann_fidelity(r0, DensityMatrix(ket_bra(basis(2, 1)))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bures_distance_sq(r0, r0) == 0.0);
  CHECK(bures_distance_sq(r0, DensityMatrix(ket_bra(basis(2, 1)))) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(bures_distance_sq(r0, rp) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(uhlmann_fidelity(r0, DensityMatrix(0.25 * CMat::Identity(4, 4))), Error);
}

TEST_CASE("fidelity of commuting states is the classical Bhattacharyya form") {
  RandomMatrices rng(13);
  for (int t = 0; t < 20; ++t) {
    RVec p(6), q(6);
    for (int i = 0; i < 6; ++i) {
      p[i] = rng.uniform();
      q[i] = rng.uniform();
    }
    p /= p.sum();
    q /= q.sum();
    const double want = std::pow((p.array() * q.array()).sqrt().sum(), 2);
    const double got = uhlmann_fidelity(DensityMatrix(p.cast<cplx>().asDiagonal().toDenseMatrix()),
                                        DensityMatrix(q.cast<cplx>().asDiagonal().toDenseMatrix()));
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("fidelity axioms on random pairs") {
  RandomMatrices rng(14);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index m = rng.integer(2, 16);
    const DensityMatrix a(rng.density(m, rng.integer(1, int(m))));
    const DensityMatrix b(rng.density(m, rng.integer(1, int(m))));
    const double f = uhlmann_fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(std::abs(f - uhlmann_fidelity(b, a)) <= 1e-10);
    CHECK(f < 1.0 - 1e-8);
    const CVec u = rng.state(m), v = rng.state(m);
    CHECK(std::abs(uhlmann_fidelity(DensityMatrix(ket_bra(u)), DensityMatrix(ket_bra(v))) -
                   std::norm(u.dot(v))) <= 1e-10);
  }
}

TEST_CASE("Uhlmann bound for reduced states") {
  RandomMatrices rng(15);
  for (int t = 0; t < 100; ++t) {
    const int L = 3 + t % 3;
    const CVec psi = rng.state(Eigen::Index(1) << L), phi = rng.state(Eigen::Index(1) << L);
    const double f = uhlmann_fidelity(partial_trace(psi, L, 1, 2), partial_trace(phi, L, 1, 2));
    CHECK(std::sqrt(f) >= std::abs(psi.dot(phi)) - 1e-10);
  }
}

TEST_CASE("purity") {
  CHECK(purity(DensityMatrix(ket_bra(basis(4, 2)))) == doctest::Approx(1.0));
  CHECK(purity(DensityMatrix(0.5 * CMat::Identity(2, 2))) == doctest::Approx(0.5));
  CHECK(purity(DensityMatrix(0.25 * CMat::Identity(4, 4))) == doctest::Approx(0.25));
}

TEST_CASE("vectorization and the Frobenius inner product") {
  const CMat X = pauli_matrix("X");
  const CVec v = vec(X);
  CHECK(v.size() == 4);
  CHECK(v[0] == cplx(0));
  CHECK(v[1] == cplx(1));
  CHECK(v[2] == cplx(1));
  CHECK(v[3] == cplx(0));
  const CMat I = CMat::Identity(2, 2);
  CHECK(frobenius_inner(0.5 * (I + pauli_matrix("Z")), 0.5 * (I + X)).real() ==
        doctest::Approx(0.5));
  RandomMatrices rng(16);
  for (int t = 0; t < 10; ++t) {
    const CMat A = rng.ginibre(4, 4), B = rng.ginibre(4, 4);
    CHECK(std::abs((A * B.adjoint()).trace() - vec(B).dot(vec(A))) < 1e-12);
    CHECK((unvec(vec(A)) - A).norm() == 0.0);
  }
  CHECK_THROWS_AS(frobenius_inner(I, CMat::Identity(4, 4)), Error);
  CHECK_THROWS_AS(vec(CMat::Zero(2, 3)), Error);
}

TEST_CASE("Pauli strings and decomposition") {
  // First character acts on the most significant qubit.
  const CMat ZI = pauli_matrix("ZI");
  CHECK(ZI(2, 2) == cplx(-1));
  CHECK(ZI(1, 1) == cplx(1));
  const CMat Y = pauli_matrix("Y");
  CHECK(Y(0, 1) == cplx(0, -1));

  auto z = pauli_decompose(pauli_matrix("Z"));
  REQUIRE(z.size() == 1);
  CHECK(z[0].label == "Z");
  CHECK(z[0].coeff == doctest::Approx(1.0));

  const CMat IX = (CMat::Identity(2, 2) - pauli_matrix("X")) / 2.0;
  auto ix = pauli_decompose(IX);
  REQUIRE(ix.size() == 2);
  CHECK(std::abs(ix[0].coeff) == doctest::Approx(0.5));
  for (const auto& t : ix) CHECK(t.coeff == doctest::Approx(t.label == "I" ? 0.5 : -0.5));

  RandomMatrices rng(17);
  for (int k = 1; k <= 4; ++k) {
    const CMat H = rng.unit_hermitian(Eigen::Index(1) << k);
    CMat rebuilt = CMat::Zero(H.rows(), H.cols());
    double prev = 1e300;
    for (const auto& t : pauli_decompose(H)) {
      rebuilt += t.coeff * pauli_matrix(t.label);
      CHECK(std::abs(t.coeff) <= prev);
      prev = std::abs(t.coeff);
    }
    CHECK((rebuilt - H).norm() < 1e-10);
  }
}

TEST_CASE("single-qubit susceptibility") {
  // H(l) = Z + l X at l = 0: chi = |<1|X|0>|^2 / 2^2 = 1/4.
  const SpMat Z = oracle::sz().sparseView(), X = oracle::sx().sparseView();
  CHECK(spectral_susceptibility(Z, X) == doctest::Approx(0.25).epsilon(1e-14));
  const double d = 1e-3;
  const SpMat Zd = SpMat(Z + d * X);
  CHECK(overlap_susceptibility_fd(Z, Zd, d) == doctest::Approx(0.25).epsilon(1e-5));
  // Commuting driver.
  CHECK(spectral_susceptibility(Z, Z) == doctest::Approx(0.0).epsilon(1e-15));
  // lambda-independent model.
  CHECK(overlap_susceptibility_fd(Z, Z, d) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_susceptibility(SpMat(RMat::Identity(2, 2).sparseView()), X),
                  Error);
}

TEST_CASE("susceptibility oracles agree to first order in delta") {
  ModelSpec s;
  s.kind = ModelKind::TransverseIsing;
  for (int L : {4, 6, 8}) {
    s.sites = L;
    const auto H = build_model(s);
    for (double h : {0.5, 0.8}) {
      const double chi = spectral_susceptibility(H, 0.0, h, 2);
      const double e3 = std::abs(overlap_susceptibility_fd(H, 0.0, h, 2, 1e-3) - chi) / chi;
      const double e4 = std::abs(overlap_susceptibility_fd(H, 0.0, h, 2, 1e-4) - chi) / chi;
      CHECK(e3 < 5e-3);
      // Truncation error is linear in delta.
      CHECK(e4 < 0.2 * e3);
    }
  }
}
