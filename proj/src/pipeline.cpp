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

#include "rfs/pipeline.hpp"

#include <cmath>
#include <set>

#include "rfs/error.hpp"
#include "rfs/io.hpp"
#include "rfs/qstate.hpp"

namespace rfs {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  fail(ErrorCode::ConfigError, what);
}

std::array<double, 2> range_of(const json& j, const char* name) {
  if (!j.contains(name)) bad(std::string("missing range ") + name);
  const json& r = j.at(name);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
    bad(std::string(name) + " must be [lo, hi]");
  std::array<double, 2> out{r[0].get<double>(), r[1].get<double>()};
  if (!(out[0] < out[1])) bad(std::string(name) + " range is empty");
  return out;
}

Region region_of(const json& j) {
  if (!j.is_object()) bad("region must be an object");
  return {range_of(j, "lambda1"), range_of(j, "lambda2")};
}

template <typename T>
T number(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) bad(std::string(key) + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    const double d = v.get<double>();
    if (d != std::floor(d)) bad(std::string(key) + " must be an integer");
  }
  return v.get<T>();
}

CMat pauli_observable(const std::string& label) {
  for (char c : label)
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      bad("observable label must use I, X, Y, Z");
  CMat m = pauli_matrix(label);
  return m / m.norm();
}

std::vector<double> h_grid(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double a = j.at("start").get<double>();
    const double b = j.at("stop").get<double>();
    const int n = j.at("count").get<int>();
    if (n < 2) bad("h grid needs count >= 2");
    for (int t = 0; t < n; ++t) out.push_back(a + (b - a) * t / (n - 1));
  } else {
    bad("fss.h must be a list or {start, stop, count}");
  }
  return out;
}

FssConfig parse_fss(const json& j) {
  if (!j.is_object()) bad("fss must be an object");
  FssConfig f;
  f.kappa = number(j, "kappa", 0.0);
  if (!j.contains("lengths") || !j.at("lengths").is_array())
    bad("fss.lengths must be a list");
  for (const auto& v : j.at("lengths")) {
    if (!v.is_number_integer()) bad("fss.lengths must be integers");
    f.lengths.push_back(v.get<int>());
  }
  if (j.contains("h_c")) f.h_c = j.at("h_c").get<double>();
  if (j.contains("max_gradients")) {
    for (const auto& v : j.at("max_gradients")) f.max_gradients.push_back(v.get<double>());
    if (f.max_gradients.size() != f.lengths.size())
      bad("fss.max_gradients needs one value per length");
    f.synthetic = true;
  } else if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    f.synthetic = true;
    f.a = number(s, "a", 1.0);
    f.b = number(s, "b", 1.0);
    f.theta = number(s, "theta", 0.5);
    f.nu = number(s, "nu", 1.0);
    if (!(f.nu > 0)) bad("fss.synthetic.nu must be positive");
  }
  if (!f.synthetic) {
    if (!j.contains("h")) bad("fss.h is required");
    f.h_values = h_grid(j.at("h"));
    if (!j.contains("observable")) bad("fss.observable is required");
    const json& o = j.at("observable");
    if (o.is_string()) {
      const std::string s = o.get<std::string>();
      if (s.size() > 4 && s.substr(s.size() - 5) == ".json")
        f.observable = observable_matrix_from_json(json::parse(read_file(s)));
      else
        f.observable = pauli_observable(s);
    } else {
      f.observable = matrix_from_json(o);
    }
  }
  return f;
}

}  // namespace

ParameterLattice RunConfig::lattice() const {
  return ParameterLattice::region(region.lambda1[0], region.lambda1[1],
                                  region.lambda2[0], region.lambda2[1], grid);
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config must be a JSON object");
  RunConfig c;
  c.raw = j;

  if (j.contains("model")) {
    const json& m = j.at("model");
    if (!m.is_object() || !m.contains("kind")) bad("model.kind is required");
    try {
      c.model.kind = parse_model_kind(m.at("kind").get<std::string>());
    } catch (const Error& e) {
      bad(e.what());
    }
    c.model.sites = number(m, "sites", 8);
    c.model.tiebreak_field = number(m, "tiebreak_field", 0.0);
    if (m.contains("couplings")) {
      if (!m.at("couplings").is_object()) bad("model.couplings must be an object");
      for (const auto& [k, v] : m.at("couplings").items()) {
        if (!v.is_number()) bad("coupling " + k + " must be a number");
        c.model.couplings[k] = v.get<double>();
      }
    }
    if (m.contains("constant")) c.model.constant = m.at("constant").get<bool>();
    if (m.contains("truncation"))
      c.model.couplings["truncation"] = number(m, "truncation", 4.0);
    c.model.validate();
  }

  if (j.contains("region")) c.region = region_of(j.at("region"));
  c.grid = number<std::size_t>(j, "grid", 8);
  if (c.grid < 3) bad("grid must be >= 3");
  c.rdm_sites = number(j, "rdm_sites", 2);
  c.observable_sites = number(j, "observable_sites", c.rdm_sites);
  for (int k : {c.rdm_sites, c.observable_sites})
    if (k < 1 || k > c.model.sites) bad("RDM window does not fit the chain");

  if (j.contains("eta")) {
    const json& e = j.at("eta");
    if (e.is_string()) {
      if (e.get<std::string>() != "auto") bad("eta must be \"auto\" or a number");
    } else if (e.is_number()) {
      c.eta = e.get<double>();
    } else {
      bad("eta must be \"auto\" or a number");
    }
  }
  c.y_min = number(j, "y_min", 0.1);
  if (!(c.y_min >= 0 && c.y_min < 1)) bad("y_min must lie in [0, 1)");
  if (j.contains("sample_region")) c.sample_region = region_of(j.at("sample_region"));

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    c.lanczos.tol_rel = number(s, "tolerance", c.lanczos.tol_rel);
    c.lanczos.max_matvecs = number(s, "max_matvecs", c.lanczos.max_matvecs);
    c.lanczos.krylov_max = number(s, "krylov_max", c.lanczos.krylov_max);
    if (s.contains("compute_gap")) c.compute_gap = s.at("compute_gap").get<bool>();
    if (!(c.lanczos.tol_rel > 0) || c.lanczos.max_matvecs < 1 ||
        c.lanczos.krylov_max < 2)
      bad("invalid solver settings");
  }
  if (j.contains("output")) c.output = j.at("output").get<std::string>();
  if (j.contains("threads")) {
    const json& t = j.at("threads");
    if (t.is_string() && t.get<std::string>() == "auto") c.threads = 0;
    else if (t.is_number_integer() && t.get<int>() >= 1) c.threads = t.get<int>();
    else bad("threads must be \"auto\" or a positive integer");
  }
  if (j.contains("seed")) c.lanczos.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("two_state")) {
    const json& t = j.at("two_state");
    c.rho_plus = matrix_from_json(t.at("rho_plus"));
    c.rho_minus = matrix_from_json(t.at("rho_minus"));
  }
  if (j.contains("fss")) c.fss = parse_fss(j.at("fss"));
  return c;
}

DiagramData compute_diagram(const ModelSpec& model,
                            const ParameterLattice& lattice,
                            const SweepOptions& opts, int field_sites,
                            const std::vector<int>& extra_windows) {
  const ParametricHamiltonian H = build_model(model);
  const Grid<GroundState> gs = sweep_ground_states(H, lattice, opts);
  const std::size_t R = lattice.rows, C = lattice.cols;

  DiagramData d;
  d.lattice = lattice;
  d.field_sites = field_sites;
  d.valid = Grid<std::uint8_t>(R, C, 0);
  d.near_degenerate = Grid<std::uint8_t>(R, C, 0);
  d.energy = Grid<double>(R, C, 0.0);

  std::set<int> windows(extra_windows.begin(), extra_windows.end());
  windows.insert(field_sites);
  for (int k : windows) {
    if (k < 1 || k > model.sites)
      fail(ErrorCode::InvalidSpec, "RDM window does not fit the chain");
    d.rdms.emplace(k, Grid<DensityMatrix>(R, C));
  }

  const std::int64_t n = std::int64_t(R * C);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t p = 0; p < n; ++p) {
    const GroundState& g = gs[std::size_t(p)];
    d.valid[p] = g.converged ? 1 : 0;
    d.near_degenerate[p] = g.near_degenerate ? 1 : 0;
    d.energy[p] = g.energy;
    for (auto& [k, grid] : d.rdms)
      grid[p] = partial_trace(g.vector, model.sites,
                              centered_window(model.sites, k), k);
  }
  for (std::size_t p = 0; p < R * C; ++p)
    if (!d.valid[p]) ++d.invalid_points;

  d.field = build_field(d.rdms.at(field_sites), d.valid);
  return d;
}

OrderParamResult discover_order_parameter(const DiagramData& d, int window,
                                          std::optional<double> eta,
                                          double y_min,
                                          const std::optional<Region>& sample) {
  const auto it = d.rdms.find(window);
  if (it == d.rdms.end())
    fail(ErrorCode::InvalidSpec, "no RDMs for the requested window");
  OrderParamResult r;
  std::vector<DensityMatrix> rdms;
  std::vector<double> angles;
  for (std::size_t i = 0; i < d.lattice.rows; ++i)
    for (std::size_t j = 0; j < d.lattice.cols; ++j) {
      const std::size_t p = i * d.lattice.cols + j;
      if (!d.valid[p]) continue;
      const auto [l1, l2] = d.lattice.point(i, j);
      if (sample && !sample->contains(l1, l2)) continue;
      r.samples.push_back(p);
      rdms.push_back(it->second[p]);
      angles.push_back(d.field.angle[p]);
    }
  if (!eta) {
    r.eta_choice = select_eta(rdms, angles, y_min);
    eta = r.eta_choice->eta;
  }
  r.labels = label_phases(angles, *eta, y_min);
  r.observable = solve_order_parameter(rdms, r.labels);
  return r;
}

FssResult run_fss(const FssConfig& cfg, const ModelSpec& model,
                  const LanczosOptions& opts) {
  FssResult r;
  std::vector<double> Ls(cfg.lengths.begin(), cfg.lengths.end());
  if (cfg.synthetic) {
    if (!cfg.max_gradients.empty()) {
      r.max_gradients = cfg.max_gradients;
    } else {
      for (double L : Ls)
        r.max_gradients.push_back(cfg.a * std::pow(L, 1.0 / cfg.nu) *
                                  (1.0 + cfg.b * std::pow(L, -cfg.theta / cfg.nu)));
    }
    r.data.kappa = cfg.kappa;
    r.data.lengths = cfg.lengths;
    r.fit = fit_fss(Ls, r.max_gradients);
    return r;
  }
  if (!cfg.observable) fail(ErrorCode::ConfigError, "fss needs an observable");
  for (int L : cfg.lengths) {
    ModelSpec s = model;
    s.sites = L;
    s.validate();
  }
  r.data = observable_sweep(*cfg.observable, model, cfg.kappa, cfg.h_values,
                            cfg.lengths, opts);
  std::vector<std::size_t> order(cfg.h_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cfg.h_values[a] < cfg.h_values[b];
  });
  std::vector<double> hs;
  for (auto i : order) hs.push_back(cfg.h_values[i]);
  std::vector<double> at_hc;
  for (const auto& curve : r.data.curves) {
    std::vector<double> ys;
    for (auto i : order) ys.push_back(curve[i]);
    const GradientMax gm = max_gradient(hs, ys);
    r.h_star.push_back(gm.h_star);
    r.max_gradients.push_back(gm.value);
    if (cfg.h_c) at_hc.push_back(interpolate(hs, ys, *cfg.h_c));
  }
  r.fit = fit_fss(Ls, r.max_gradients);
  if (cfg.h_c) r.fit.beta = fit_beta(Ls, at_hc, r.fit.nu_estimate);
  return r;
}

}  // namespace rfs
