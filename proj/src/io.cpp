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

#include "rfs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rfs/error.hpp"
#include "rfs/models.hpp"

namespace rfs {

using nlohmann::json;

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field_csv(const ParameterLattice& lattice, const RfsField& field) {
  std::string out = "lambda1,lambda2,g,Px,Py,angle,valid\n";
  for (std::size_t i = 0; i < lattice.rows; ++i)
    for (std::size_t j = 0; j < lattice.cols; ++j) {
      const auto [l1, l2] = lattice.point(i, j);
      const cplx p = field.P(i, j);
      out += fmt17(l1) + ',' + fmt17(l2) + ',' + fmt17(field.g(i, j)) + ',' +
             fmt17(p.real()) + ',' + fmt17(p.imag()) + ',' +
             fmt17(field.angle(i, j)) + ',' +
             (field.valid(i, j) ? "1" : "0") + '\n';
    }
  return out;
}

std::string ppm_bytes(const Grid<Rgb>& image) {
  // Row 0 of the grid is the smallest lambda2; images run top-down.
  std::string out = "P6\n" + std::to_string(image.cols()) + " " +
                    std::to_string(image.rows()) + "\n255\n";
  for (std::size_t r = image.rows(); r-- > 0;)
    for (std::size_t c = 0; c < image.cols(); ++c)
      for (auto ch : image(r, c)) out.push_back(char(ch));
  return out;
}

std::string streamlines_svg(const std::vector<Polyline>& lines,
                            const ParameterLattice& lattice,
                            const std::vector<Polyline>& overlays) {
  const double x0 = lattice.origin1;
  const double y0 = lattice.origin2;
  const double w = lattice.step1 * double(lattice.cols - 1);
  const double h = lattice.step2 * double(lattice.rows - 1);
  const double stroke = 0.002 * std::max(w, h);
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
    << "width=\"800\" height=\"800\" preserveAspectRatio=\"none\" viewBox=\""
    << fmt17(x0) << ' ' << fmt17(-(y0 + h)) << ' ' << fmt17(w) << ' '
    << fmt17(h) << "\">\n"
    << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" "
    << "stroke-width=\"" << fmt17(stroke) << "\">\n";
  auto emit = [&](const Polyline& line, const char* extra) {
    s << "<polyline" << extra << " points=\"";
    for (std::size_t k = 0; k < line.size(); ++k)
      s << (k ? " " : "") << fmt17(line[k].first) << ','
        << fmt17(line[k].second);
    s << "\"/>\n";
  };
  for (const auto& l : lines) emit(l, "");
  for (const auto& l : overlays)
    emit(l, " stroke=\"red\" stroke-dasharray=\"0.02,0.01\"");
  s << "</g>\n</svg>\n";
  return s.str();
}

std::vector<Polyline> annni_overlays(const ParameterLattice& lattice) {
  const double k0 = lattice.origin1;
  const double k1 = lattice.lambda1(lattice.cols - 1);
  const double h0 = lattice.origin2;
  const double h1 = lattice.lambda2(lattice.rows - 1);
  std::vector<Polyline> out(3);
  const int n = 200;
  for (int t = 0; t <= n; ++t) {
    const double k = k0 + (k1 - k0) * t / n;
    auto keep = [&](Polyline& p, std::optional<double> h) {
      if (h && *h >= h0 && *h <= h1) p.emplace_back(k, *h);
    };
    if (k > 0 && k <= 0.5) keep(out[0], theory_h_ising(k));
    keep(out[1], theory_h_kt(k));
    keep(out[2], theory_h_pt(k));
  }
  std::vector<Polyline> nonempty;
  for (auto& p : out)
    if (p.size() > 1) nonempty.push_back(std::move(p));
  return nonempty;
}

json matrix_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::ConfigError, "matrix must be a nonempty array of rows");
  const auto n = Eigen::Index(j.size());
  CMat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!j[r].is_array() || Eigen::Index(j[r].size()) != n)
      fail(ErrorCode::ConfigError, "matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = j[r][c];
      if (e.is_number()) m(r, c) = e.get<double>();
      else if (e.is_array() && e.size() == 2)
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      else fail(ErrorCode::ConfigError, "matrix entry must be x or [re, im]");
    }
  }
  return m;
}

json observable_json(const Observable& obs) {
  json j;
  const CMat& M = obs.M;
  j["order"] = M.rows();
  json flat = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c)
      flat.push_back({M(r, c).real(), M(r, c).imag()});
  j["matrix"] = flat;
  j["frobenius_norm"] = M.norm();
  j["lambda_min"] = obs.lambda_min;
  j["a_min"] = obs.a_min;
  j["a_max"] = obs.a_max;
  j["null_dim"] = obs.null_dim;

  auto projectors = eigen_projectors(M);
  json ev = json::array();
  for (const auto& p : projectors) ev.push_back(p.alpha);
  j["eigenvalues"] = ev;

  json terms = json::array();
  for (const auto& t : pauli_decompose(M))
    terms.push_back({{"label", t.label}, {"coeff", t.coeff}});
  j["pauli_terms"] = terms;

  json pj = json::array();
  for (const auto& p : projectors) {
    json e;
    e["alpha"] = p.alpha;
    if (M.rows() <= 8) {
      ProductFit fit = fit_product_projector(p.projector);
      e["product_fit"] = {{"angles", fit.angles}, {"residual", fit.residual}};
    } else {
      e["product_fit"] = nullptr;
    }
    pj.push_back(e);
  }
  j["projectors"] = pj;
  return j;
}

CMat observable_matrix_from_json(const json& j) {
  const auto m = j.at("order").get<Eigen::Index>();
  const auto& flat = j.at("matrix");
  if (Eigen::Index(flat.size()) != m * m)
    fail(ErrorCode::ConfigError, "observable matrix has the wrong size");
  CMat M(m, m);
  for (Eigen::Index k = 0; k < m * m; ++k)
    M(k / m, k % m) = cplx(flat[k][0].get<double>(), flat[k][1].get<double>());
  return M;
}

json fss_fit_json(const FssFit& fit) {
  json j;
  j["slope"] = fit.slope;
  j["stage1_slope"] = fit.stage1_slope;
  j["nu_estimate"] = fit.nu_estimate;
  j["a_scale"] = fit.a_scale;
  j["b_double_prime"] = fit.b_double_prime;
  j["theta"] = fit.theta;
  j["beta"] = fit.beta ? json(*fit.beta) : json(nullptr);
  j["residuals"] = fit.residuals;
  j["residual_norm"] = fit.residual_norm;
  j["joint_fit"] = fit.joint;
  return j;
}

std::string fss_csv(const FssDataset& data) {
  std::string out = "L,h,expectation\n";
  for (std::size_t l = 0; l < data.lengths.size(); ++l)
    for (std::size_t t = 0; t < data.h_values.size(); ++t)
      out += std::to_string(data.lengths[l]) + ',' + fmt17(data.h_values[t]) +
             ',' + fmt17(data.curves[l][t]) + '\n';
  return out;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::ConfigError, "cannot write " + path);
  f.write(bytes.data(), std::streamsize(bytes.size()));
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::ConfigError, "cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rfs
