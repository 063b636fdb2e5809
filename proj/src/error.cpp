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

#include "rfs/error.hpp"

namespace rfs {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DegenerateGroundState: return "DegenerateGroundState";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NoValidLabeling: return "NoValidLabeling";
    case ErrorCode::EmptyPhaseSet: return "EmptyPhaseSet";
    case ErrorCode::NotIndefinite: return "NotIndefinite";
    case ErrorCode::IdenticalStates: return "IdenticalStates";
    case ErrorCode::DegenerateStates: return "DegenerateStates";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::SingularFit: return "SingularFit";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace rfs
