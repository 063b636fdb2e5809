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
#include "rfs/models.hpp"

using namespace rfs;

namespace {

ModelSpec spec(ModelKind k, int L) {
  ModelSpec s;
  s.kind = k;
  s.sites = L;
  return s;
}

double lowest(const RMat& H) {
  return Eigen::SelfAdjointEigenSolver<RMat>(H).eigenvalues()[0];
}

double max_abs(const RMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("ANNNI two-site bond at the origin") {
  const auto H = build_model(spec(ModelKind::ANNNI, 2));
  const RMat h = oracle::dense(H.assemble(0, 0));
  CHECK(max_abs(h + oracle::kron(oracle::sx(), oracle::sx())) == 0.0);
  CHECK(lowest(h) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("cluster model in the field-only limit") {
  const auto H = build_model(spec(ModelKind::Cluster, 3));
  const RMat h = oracle::dense(H.assemble(0.0, 1.0));
  Eigen::SelfAdjointEigenSolver<RMat> es(h);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(std::abs(es.eigenvectors()(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Rydberg driving-only limit") {
  const auto H = build_model(spec(ModelKind::Rydberg, 3));
  CHECK(lowest(oracle::dense(H.assemble(0, 0))) ==
        doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("builders agree with Kronecker-product references") {
  for (int L : {3, 4, 6}) {
    const auto a = build_model(spec(ModelKind::ANNNI, L));
    CHECK(max_abs(oracle::dense(a.assemble(0.3, 0.7)) - oracle::annni(L, 0.3, 0.7)) <
          1e-14);
    const auto c = build_model(spec(ModelKind::Cluster, L));
    CHECK(max_abs(oracle::dense(c.assemble(0.8, 1.1)) - oracle::cluster(L, 0.8, 1.1)) <
          1e-14);
    ModelSpec rs = spec(ModelKind::Rydberg, L);
    rs.couplings["truncation"] = std::min(4, L - 1);
    const auto r = build_model(rs);
    CHECK(max_abs(oracle::dense(r.assemble(2.5, 40.0)) -
                  oracle::rydberg(L, 2.5, 40.0, std::min(4, L - 1))) < 1e-12);
  }
}

TEST_CASE("J1 rescales the whole ANNNI Hamiltonian") {
  ModelSpec s = spec(ModelKind::ANNNI, 4);
  s.couplings["J1"] = 2.0;
  const auto H = build_model(s);
  CHECK(max_abs(oracle::dense(H.assemble(0.4, 0.6)) - 2.0 * oracle::annni(4, 0.4, 0.6)) <
        1e-13);
}

TEST_CASE("tiebreak field adds -eps sum X") {
  ModelSpec s = spec(ModelKind::TransverseIsing, 3);
  s.tiebreak_field = 1e-4;
  const auto H = build_model(s);
  RMat want = oracle::annni(3, 0.0, 0.5);
  for (int i = 0; i < 3; ++i) want -= 1e-4 * oracle::one_site(3, i, oracle::sx());
  CHECK(max_abs(oracle::dense(H.assemble(0.0, 0.5)) - want) < 1e-15);
}

TEST_CASE("components are exactly symmetric and assemble is linear") {
  for (auto k : {ModelKind::ANNNI, ModelKind::TransverseIsing, ModelKind::Cluster,
                 ModelKind::Rydberg}) {
    const auto H = build_model(spec(k, 5));
    for (const SpMat* c : {&H.h0, &H.h1, &H.h2}) {
      const RMat d = oracle::dense(*c);
      CHECK(max_abs(d - d.transpose()) == 0.0);
    }
    const RMat four = oracle::dense(H.assemble(0.3 + 1.2, 0.7 - 0.4)) -
                      oracle::dense(H.assemble(0.3, 0.7)) -
                      oracle::dense(H.assemble(1.2, -0.4)) +
                      oracle::dense(H.assemble(0, 0));
    CHECK(max_abs(four) < 1e-13);
  }
}

TEST_CASE("ANNNI at kappa = 0 equals the transverse Ising builder") {
  const auto a = build_model(spec(ModelKind::ANNNI, 6));
  const auto t = build_model(spec(ModelKind::TransverseIsing, 6));
  CHECK(max_abs(oracle::dense(a.assemble(0.0, 0.9)) - oracle::dense(t.assemble(0.0, 0.9))) ==
        0.0);
}

TEST_CASE("Rydberg occupation terms are projectors") {
  const int L = 4;
  const auto H = build_model(spec(ModelKind::Rydberg, L));
  // h1 = -sum n_i is diagonal with entries -popcount(s).
  const RMat h1 = oracle::dense(H.h1);
  for (int s = 0; s < (1 << L); ++s) CHECK(h1(s, s) == -double(__builtin_popcount(s)));
  for (int i = 0; i < L; ++i) {
    const RMat n = oracle::one_site(L, i, oracle::num());
    CHECK(max_abs(n * n - n) == 0.0);
  }
}

TEST_CASE("norm bound dominates the spectral norm") {
  const auto H = build_model(spec(ModelKind::ANNNI, 6));
  const RMat h = oracle::dense(H.assemble(0.8, 1.3));
  Eigen::SelfAdjointEigenSolver<RMat> es(h);
  CHECK(H.norm_bound(0.8, 1.3) >= es.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("spec validation") {
  auto code = [](const ModelSpec& s) {
    try {
      s.validate();
    } catch (const Error& e) {
      return int(e.code());
    }
    return -1;
  };
  ModelSpec s = spec(ModelKind::ANNNI, 1);
  CHECK(code(s) == int(ErrorCode::InvalidSpec));
  s.sites = 4;
  s.tiebreak_field = 2e-3;
  CHECK(code(s) == int(ErrorCode::InvalidSpec));
  s.tiebreak_field = -1e-9;
  CHECK(code(s) == int(ErrorCode::InvalidSpec));
  s.tiebreak_field = 1e-6;
  CHECK(code(s) == -1);
  ModelSpec r = spec(ModelKind::Rydberg, 4);
  r.couplings["truncation"] = 4;
  CHECK(code(r) == int(ErrorCode::InvalidSpec));
  r.couplings["truncation"] = 1.5;
  CHECK(code(r) == int(ErrorCode::InvalidSpec));
  ModelSpec big = spec(ModelKind::ANNNI, 30);
  CHECK(code(big) == int(ErrorCode::UnsupportedSize));
  CHECK_THROWS_AS(build_model(big), Error);
  CHECK_THROWS_AS(parse_model_kind("potts"), Error);
  CHECK(parse_model_kind("tfim") == ModelKind::TransverseIsing);
  CHECK(parse_model_kind("annni") == ModelKind::ANNNI);
}

TEST_CASE("theory lines") {
  CHECK(*theory_h_kt(0.5) == 0.0);
  CHECK(*theory_h_pt(0.5) == 0.0);
  CHECK_FALSE(theory_h_kt(0.3).has_value());
  CHECK_FALSE(theory_h_pt(0.3).has_value());
  // Direct evaluation: 9 * (1 - sqrt(0.74 / 0.9)).
  CHECK(theory_h_ising(0.1) == doctest::Approx(9.0 * (1.0 - std::sqrt(0.74 / 0.9))));
  CHECK(theory_h_ising(0.1) == doctest::Approx(0.8391).epsilon(1e-4));
  CHECK(theory_h_ising(1e-4) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(*theory_h_kt(1.0) == doctest::Approx(1.05 * std::sqrt(0.5 * 0.9)));
  CHECK(*theory_h_pt(1.0) == doctest::Approx(0.525));
  CHECK_THROWS_AS(theory_h_ising(0.0), Error);
  CHECK_THROWS_AS(theory_h_ising(1.5), Error);
  const TheoryLines t = theory_lines(0.7);
  CHECK(t.h_KT.has_value());
  CHECK(t.h_PT.has_value());
}
