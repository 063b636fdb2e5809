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

#include <string>
#include <vector>

#include <json.hpp>

#include "rfs/fss.hpp"
#include "rfs/lattice.hpp"
#include "rfs/ordparam.hpp"
#include "rfs/rfsfield.hpp"

namespace rfs {

/// %.17g, with "nan" for NaN.
std::string fmt17(double v);

/// Header `lambda1,lambda2,g,Px,Py,angle,valid`, row-major.
std::string field_csv(const ParameterLattice& lattice, const RfsField& field);

/// Binary P6, 8-bit.
std::string ppm_bytes(const Grid<Rgb>& image);

/// SVG 1.1 in parameter coordinates; `overlays` are drawn as dashed lines.
std::string streamlines_svg(const std::vector<Polyline>& lines,
                            const ParameterLattice& lattice,
                            const std::vector<Polyline>& overlays = {});

/// ANNNI transition lines clipped to the lattice region.
std::vector<Polyline> annni_overlays(const ParameterLattice& lattice);

nlohmann::json matrix_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

nlohmann::json observable_json(const Observable& obs);
CMat observable_matrix_from_json(const nlohmann::json& j);

nlohmann::json fss_fit_json(const FssFit& fit);

/// Header `L,h,expectation`.
std::string fss_csv(const FssDataset& data);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

/// FNV-1a 64-bit, hex.
std::string content_hash(const std::string& bytes);

}  // namespace rfs
