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

#include "rfs/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

#include "rfs/error.hpp"

namespace rfs {

namespace {

using Triplets = std::vector<Eigen::Triplet<double, std::int64_t>>;

// Site i (0-based, left to right) lives at bit L-1-i.
inline std::int64_t site_mask(int L, int i) {
  return std::int64_t{1} << (L - 1 - i);
}

inline double z_sign(std::int64_t s, int L, int i) {
  return (s & site_mask(L, i)) ? -1.0 : 1.0;
}

inline double occupation(std::int64_t s, int L, int i) {
  return (s & site_mask(L, i)) ? 1.0 : 0.0;
}

void add_x(Triplets& t, int L, std::int64_t dim, double c) {
  if (c == 0.0) return;
  for (std::int64_t s = 0; s < dim; ++s)
    for (int i = 0; i < L; ++i) t.emplace_back(s, s ^ site_mask(L, i), c);
}

void add_xx(Triplets& t, int L, std::int64_t dim, int range, double c) {
  for (std::int64_t s = 0; s < dim; ++s)
    for (int i = 0; i + range < L; ++i)
      t.emplace_back(s, s ^ site_mask(L, i) ^ site_mask(L, i + range), c);
}

void add_z(Triplets& t, int L, std::int64_t dim, double c) {
  for (std::int64_t s = 0; s < dim; ++s) {
    double v = 0.0;
    for (int i = 0; i < L; ++i) v += z_sign(s, L, i);
    if (v != 0.0) t.emplace_back(s, s, c * v);
  }
}

void add_xzx(Triplets& t, int L, std::int64_t dim, double c) {
  for (std::int64_t s = 0; s < dim; ++s)
    for (int i = 1; i + 1 < L; ++i)
      t.emplace_back(s, s ^ site_mask(L, i - 1) ^ site_mask(L, i + 1),
                     c * z_sign(s, L, i));
}

void add_n(Triplets& t, int L, std::int64_t dim, double c) {
  for (std::int64_t s = 0; s < dim; ++s) {
    double v = 0.0;
    for (int i = 0; i < L; ++i) v += occupation(s, L, i);
    if (v != 0.0) t.emplace_back(s, s, c * v);
  }
}

void add_vdw(Triplets& t, int L, std::int64_t dim, int range) {
  for (std::int64_t s = 0; s < dim; ++s) {
    double v = 0.0;
    for (int i = 0; i < L; ++i) {
      if (!occupation(s, L, i)) continue;
      for (int r = 1; r <= range && i + r < L; ++r)
        if (occupation(s, L, i + r)) v += 1.0 / std::pow(double(r), 6);
    }
    if (v != 0.0) t.emplace_back(s, s, v);
  }
}

SpMat from_triplets(const Triplets& t, std::int64_t dim) {
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::ANNNI: return "ANNNI";
    case ModelKind::TransverseIsing: return "TransverseIsing";
    case ModelKind::Cluster: return "Cluster";
    case ModelKind::Rydberg: return "Rydberg";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  std::string key;
  for (char c : name)
    if (c != '_' && c != '-') key.push_back(char(std::tolower((unsigned char)c)));
  for (auto k : {ModelKind::ANNNI, ModelKind::TransverseIsing,
                 ModelKind::Cluster, ModelKind::Rydberg}) {
    std::string ref;
    for (const char* p = model_name(k); *p; ++p)
      ref.push_back(char(std::tolower((unsigned char)*p)));
    if (key == ref) return k;
  }
  if (key == "tfim" || key == "ising") return ModelKind::TransverseIsing;
  fail(ErrorCode::InvalidSpec, "unknown model kind: " + name);
}

double ModelSpec::coupling(const std::string& key, double fallback) const {
  auto it = couplings.find(key);
  return it == couplings.end() ? fallback : it->second;
}

void ModelSpec::validate() const {
  if (sites < 2) fail(ErrorCode::InvalidSpec, "sites must be >= 2");
  if (sites > 40) fail(ErrorCode::UnsupportedSize, "too many sites");
  if (!(tiebreak_field >= 0.0) || tiebreak_field > 1e-3)
    fail(ErrorCode::InvalidSpec, "tiebreak_field must lie in [0, 1e-3]");
  if (kind == ModelKind::Rydberg) {
    double r = coupling("truncation", std::min(4.0, double(sites - 1)));
    if (r != std::floor(r) || r < 1 || r >= sites)
      fail(ErrorCode::InvalidSpec,
           "truncation must be an integer in [1, sites)");
  }
  if (kind == ModelKind::ANNNI) {
    double j1 = coupling("J1", 1.0);
    if (!std::isfinite(j1) || j1 == 0.0)
      fail(ErrorCode::InvalidSpec, "J1 must be finite and nonzero");
  }
  if ((std::int64_t{1} << sites) > max_dimension)
    fail(ErrorCode::UnsupportedSize,
         "2^" + std::to_string(sites) + " exceeds the dimension budget");
}

SpMat ParametricHamiltonian::assemble(double l1, double l2) const {
  SpMat h = h0 + l1 * h1 + l2 * h2;
  h.makeCompressed();
  return h;
}

double ParametricHamiltonian::norm_bound(double l1, double l2) const {
  SpMat h = assemble(l1, l2);
  double best = 0.0;
  for (std::int64_t r = 0; r < h.outerSize(); ++r) {
    double s = 0.0;
    for (SpMat::InnerIterator it(h, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

ParametricHamiltonian build_model(const ModelSpec& spec) {
  spec.validate();
  const int L = spec.sites;
  const std::int64_t dim = std::int64_t{1} << L;
  Triplets t0, t1, t2;
  ParametricHamiltonian H;
  H.sites = L;
  H.dimension = dim;

  switch (spec.kind) {
    case ModelKind::TransverseIsing:
      add_xx(t0, L, dim, 1, -1.0);
      add_z(t2, L, dim, -1.0);
      H.param_names = {"unused", "h"};
      break;
    case ModelKind::ANNNI: {
      const double j1 = spec.coupling("J1", 1.0);
      add_xx(t0, L, dim, 1, -j1);
      add_xx(t1, L, dim, 2, j1);
      add_z(t2, L, dim, -j1);
      H.param_names = {"kappa", "h"};
      break;
    }
    case ModelKind::Cluster:
      add_xzx(t1, L, dim, -1.0);
      add_z(t2, L, dim, -1.0);
      H.param_names = {"K", "h"};
      break;
    case ModelKind::Rydberg:
      add_x(t0, L, dim, 1.0);
      add_n(t1, L, dim, -1.0);
      add_vdw(t2, L, dim, int(spec.coupling("truncation", std::min(4.0, double(L - 1)))));
      H.param_names = {"delta_over_omega", "rb_over_a_pow6"};
      break;
  }
  add_x(t0, L, dim, -spec.tiebreak_field);
  if (spec.constant) {
    t1.clear();
    t2.clear();
  }

  H.h0 = from_triplets(t0, dim);
  H.h1 = from_triplets(t1, dim);
  H.h2 = from_triplets(t2, dim);
  return H;
}

double theory_h_ising(double kappa) {
  if (!(kappa > 0.0) || kappa >= 1.0)
    fail(ErrorCode::DomainError, "h_I needs 0 < kappa < 1");
  double rad = (1.0 - 3.0 * kappa + 4.0 * kappa * kappa) / (1.0 - kappa);
  if (rad < 0.0) fail(ErrorCode::DomainError, "negative radicand in h_I");
  return (1.0 - kappa) / kappa * (1.0 - std::sqrt(rad));
}

std::optional<double> theory_h_kt(double kappa) {
  if (kappa < 0.5) return std::nullopt;
  return 1.05 * std::sqrt((kappa - 0.5) * (kappa - 0.1));
}

std::optional<double> theory_h_pt(double kappa) {
  if (kappa < 0.5) return std::nullopt;
  return 1.05 * (kappa - 0.5);
}

TheoryLines theory_lines(double kappa) {
  return {theory_h_ising(kappa), theory_h_kt(kappa), theory_h_pt(kappa)};
}

}  // namespace rfs
