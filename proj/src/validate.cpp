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

#include "rfs/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rfs/models.hpp"
#include "rfs/ordparam.hpp"
#include "rfs/random.hpp"

namespace rfs {

namespace {

CheckResult at_most(std::string name, double tol, double measured) {
  return {std::move(name), "<=", tol, measured, measured <= tol};
}

CheckResult at_least(std::string name, double tol, double measured) {
  return {std::move(name), ">=", tol, measured, measured >= tol};
}

// Orthonormal real coordinates for m x m Hermitian matrices.
std::vector<CMat> hermitian_basis(Eigen::Index m) {
  std::vector<CMat> basis;
  for (Eigen::Index i = 0; i < m; ++i) {
    CMat e = CMat::Zero(m, m);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      CMat re = CMat::Zero(m, m), im = CMat::Zero(m, m);
      re(i, j) = re(j, i) = r;
      im(i, j) = cplx(0, -r);
      im(j, i) = cplx(0, r);
      basis.push_back(re);
      basis.push_back(im);
    }
  return basis;
}

}  // namespace

std::vector<double> xi_singular_values(const CMat& plus, const CMat& minus) {
  const auto basis = hermitian_basis(plus.rows());
  const Eigen::Index n = Eigen::Index(basis.size());
  RMat X(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const CMat img = xi_apply(basis[c], plus, minus);
    for (Eigen::Index r = 0; r < n; ++r)
      X(r, c) = frobenius_inner(basis[r], img).real();
  }
  Eigen::JacobiSVD<RMat> svd(X);
  const RVec s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  RandomMatrices rng(opts.seed);
  const FidelityFn& F = opts.fidelity;

  // Fidelity axioms on random mixed states of orders 2..16.
  double sym = 0, below = 0, above = 0, pure = 0, uhl = 0;
  for (int t = 0; t < opts.fidelity_pairs; ++t) {
    const Eigen::Index m = rng.integer(2, 16);
    const DensityMatrix a(rng.density(m, rng.integer(1, int(m))));
    const DensityMatrix b(rng.density(m, rng.integer(1, int(m))));
    const double fab = F(a, b), fba = F(b, a);
    sym = std::max(sym, std::abs(fab - fba));
    below = std::max(below, -std::min(fab, fba));
    above = std::max(above, std::max(fab, fba) - 1.0);

    const CVec u = rng.state(m), v = rng.state(m);
    const double ov = std::norm(u.dot(v));
    pure = std::max(pure, std::abs(F(DensityMatrix(u * u.adjoint()),
                                     DensityMatrix(v * v.adjoint())) - ov));

    // Reduced states of two random pure states on 2 x 2^q qubits.
    const int L = 2 + t % 3;
    const CVec psi = rng.state(Eigen::Index(1) << L);
    const CVec phi = rng.state(Eigen::Index(1) << L);
    const double f = F(partial_trace(psi, L, 0, 2), partial_trace(phi, L, 0, 2));
    uhl = std::max(uhl, std::abs(psi.dot(phi)) - std::sqrt(std::max(f, 0.0)));
  }
  out.push_back(at_most("fidelity symmetry |F(a,b)-F(b,a)|", 1e-10, sym));
  out.push_back(at_most("fidelity below 0", 0.0, below));
  out.push_back(at_most("fidelity above 1", 1e-12, above));
  out.push_back(at_most("pure-state reduction |F-|<u,v>|^2|", 1e-10, pure));
  out.push_back(at_most("Uhlmann bound |<psi,phi>|-sqrt(F)", 1e-10, uhl));

  // Spectral sum against the finite-difference overlap form.
  {
    ModelSpec spec;
    spec.kind = ModelKind::TransverseIsing;
    spec.sites = 6;
    const ParametricHamiltonian H = build_model(spec);
    const double chi = spectral_susceptibility(H, 0.0, 0.5, 2);
    const double fd = overlap_susceptibility_fd(H, 0.0, 0.5, 2, 1e-3);
    out.push_back(at_most("susceptibility TFIM L=6 h=0.5 relative difference",
                          1e-3, std::abs(chi - fd) / std::abs(chi)));
  }

  // Xi theorem.
  double sv = 0, orth = 0, recon = 0, norms = 0;
  for (int t = 0; t < opts.xi_pairs; ++t) {
    const CMat p = rng.density(4), q = rng.density(4);
    const XiSvd s = xi_svd(p, q);
    const double want = std::sqrt(1.0 - s.c * s.c);
    const auto direct = xi_singular_values(p, q);
    sv = std::max({sv, std::abs(s.s1 - want), std::abs(s.s2 - want),
                   std::abs(direct[0] - want), std::abs(direct[1] - want),
                   direct.size() > 2 ? direct[2] : 0.0});
    orth = std::max({orth, std::abs(frobenius_inner(s.V1, s.V2)),
                     std::abs(frobenius_inner(s.U1, s.U2))});
    norms = std::max({norms, std::abs(s.V1.squaredNorm() - want * want),
                      std::abs(s.U2.squaredNorm() - want * want)});
    const CMat K = rng.unit_hermitian(4);
    recon = std::max(recon, (xi_apply(K, p, q) - xi_svd_apply(s, K)).norm());
  }
  out.push_back(at_most("Xi singular values vs sqrt(1-c^2)", 1e-10, sv));
  out.push_back(at_most("Xi <V1,V2>, <U1,U2>", 1e-10, orth));
  out.push_back(at_most("Xi |V1|^2, |U2|^2 vs 1-c^2", 1e-10, norms));
  out.push_back(at_most("Xi reconstruction", 1e-10, recon));

  // Exact Ising pair.
  {
    const CMat I = CMat::Identity(2, 2);
    const CMat Z = pauli_matrix("Z"), X = pauli_matrix("X");
    const DensityMatrix plus(0.5 * (I + Z)), minus(0.5 * (I + X));
    const Observable o = solve_two_state(plus, minus);
    const CMat want = (I + 2.0 * Z - X) / (2.0 * std::sqrt(3.0));
    const double ep = (plus.matrix() * o.M).trace().real();
    const double em = (minus.matrix() * o.M).trace().real();
    const double ez = (plus.matrix() * Z).trace().real() / std::sqrt(2.0);
    out.push_back(at_most("Ising pair |M - (I+2Z-X)/(2 sqrt3)|", 1e-10,
                          (o.M - want).norm()));
    out.push_back(at_most("Ising pair |tr(rho+ M) - sqrt3/2|", 1e-12,
                          std::abs(ep - std::sqrt(3.0) / 2.0)));
    out.push_back(at_most("Ising pair |tr(rho- M)|", 1e-12, std::abs(em)));
    out.push_back(at_least("Ising pair tr(rho+ M) - tr(rho+ Z/sqrt2)", 0.0,
                           ep - ez));
  }
  return out;
}

std::string format_report(const std::vector<CheckResult>& checks) {
  std::string s;
  char line[256];
  std::snprintf(line, sizeof line, "%-4s  %-52s  %-2s  %-10s  %s\n", "", "check",
                "", "tolerance", "measured");
  s += line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-4s  %-52s  %-2s  %-10.3g  %.6g\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.relation.c_str(),
                  c.tolerance, c.measured);
    s += line;
  }
  return s;
}

}  // namespace rfs
