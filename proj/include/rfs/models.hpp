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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "rfs/types.hpp"

namespace rfs {

enum class ModelKind { ANNNI, TransverseIsing, Cluster, Rydberg };

const char* model_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::ANNNI;
  int sites = 8;
  // ANNNI: "J1"; Rydberg: "truncation" (neighbor count, default
  // min(4, sites - 1)).
  std::map<std::string, double> couplings;
  // Bias -eps * sum sigma^x. Default 0, see README for the reason.
  double tiebreak_field = 0.0;
  // Drop h1 and h2, leaving a lambda-independent H = h0.
  bool constant = false;
  // Largest Hilbert-space dimension build_model will accept.
  std::int64_t max_dimension = std::int64_t{1} << 22;

  double coupling(const std::string& key, double fallback) const;
  void validate() const;
};

/// H(l1, l2) = h0 + l1 * h1 + l2 * h2, all real symmetric in the z basis
/// with site 1 as the most significant bit and |0> = spin up.
struct ParametricHamiltonian {
  SpMat h0, h1, h2;
  std::array<std::string, 2> param_names;
  int sites = 0;
  std::int64_t dimension = 0;

  SpMat assemble(double l1, double l2) const;
  /// Cheap upper bound on the spectral norm of assemble(l1, l2).
  double norm_bound(double l1, double l2) const;
};

ParametricHamiltonian build_model(const ModelSpec& spec);

struct TheoryLines {
  double h_I;
  std::optional<double> h_KT;
  std::optional<double> h_PT;
};

/// Ising-like transition line of the ANNNI model; throws DomainError
/// outside 0 < kappa < 1.
double theory_h_ising(double kappa);
std::optional<double> theory_h_kt(double kappa);
std::optional<double> theory_h_pt(double kappa);
TheoryLines theory_lines(double kappa);

}  // namespace rfs
