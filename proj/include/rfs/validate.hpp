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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rfs/qstate.hpp"

namespace rfs {

struct CheckResult {
  std::string name;
  std::string relation;  // how measured compares to tolerance, e.g. "<="
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;
};

using FidelityFn =
    std::function<double(const DensityMatrix&, const DensityMatrix&)>;

struct ValidationOptions {
  FidelityFn fidelity = uhlmann_fidelity;  // replaceable for fault injection
  int fidelity_pairs = 500;
  int xi_pairs = 100;
  std::uint64_t seed = 20260101;
};

/// Fidelity axioms, susceptibility cross-check, Xi theorem and the exact
/// Ising two-state fixture.
std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

/// Largest singular values of K -> Xi(K) on Hermitian m x m matrices,
/// computed from the explicit matrix of the map.
std::vector<double> xi_singular_values(const CMat& plus, const CMat& minus);

std::string format_report(const std::vector<CheckResult>& checks);

}  // namespace rfs
