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

// rfsphase: phase diagrams, order parameters and finite-size scaling from
// reduced fidelity susceptibility.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfs/error.hpp"
#include "rfs/io.hpp"
#include "rfs/pipeline.hpp"
#include "rfs/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rfs;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr const char* kNotIndefiniteText =
    "Interpretation: the labelled phases cannot be distinguished by any "
    "observable on this RDM window; try a larger window or a different eta.";

struct Flags {
  std::string config;
  std::string out;
  int threads = -1;
  long long seed = -1;
  bool gs_form = false;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::UnsupportedSize:
      return 2;
    case ErrorCode::NotIndefinite:
      return 4;
    default:
      return 3;
  }
}

class Run {
 public:
  Run(const Flags& f, const char* command) : command_(command) {
    json j = json::object();
    if (!f.config.empty()) {
      try {
        j = json::parse(read_file(f.config));
      } catch (const json::exception& e) {
        fail(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
      }
    }
    if (!f.out.empty()) j["output"] = f.out;
    if (f.threads > 0) j["threads"] = f.threads;
    if (f.seed >= 0) j["seed"] = f.seed;
    try {
      cfg_ = parse_config(j);
    } catch (const json::exception& e) {
      fail(ErrorCode::ConfigError, e.what());
    }
    hash_ = content_hash(cfg_.raw.dump());
    if (cfg_.threads > 0) omp_set_num_threads(cfg_.threads);
    std::error_code ec;
    fs::create_directories(cfg_.output, ec);
    if (ec) fail(ErrorCode::ConfigError, "cannot create " + cfg_.output);
    start_ = std::chrono::steady_clock::now();
  }

  const RunConfig& cfg() const { return cfg_; }
  const std::string& hash() const { return hash_; }

  void write(const std::string& name, const std::string& bytes) {
    write_file((fs::path(cfg_.output) / name).string(), bytes);
    outputs_.push_back({{"file", name}, {"config_hash", hash_}});
  }

  void time(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    timings_[stage] = std::chrono::duration<double>(now - start_).count();
  }

  void finish(json extra = json::object()) {
    json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                         std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION);
    m["config"] = cfg_.raw;
    m["config_hash"] = hash_;
    m["seed"] = cfg_.lanczos.seed;
    m["threads"] = omp_get_max_threads();
    m["outputs"] = outputs_;
    m["timings_seconds"] = timings_;
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_file((fs::path(cfg_.output) / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  std::string command_;
  RunConfig cfg_;
  std::string hash_;
  json outputs_ = json::array();
  json timings_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions s;
  s.lanczos = c.lanczos;
  s.compute_gap = c.compute_gap;
  return s;
}

int cmd_phase_diagram(const Flags& f) {
  Run run(f, "phase-diagram");
  const RunConfig& c = run.cfg();
  const ParameterLattice lat = c.lattice();
  DiagramData d = compute_diagram(c.model, lat, sweep_options(c), c.rdm_sites);
  run.time("diagram");

  run.write("field.csv", field_csv(lat, d.field));
  run.write("angle.ppm",
            ppm_bytes(cyclic_colormap(upsample2_angle(d.field.angle))));
  const auto lines = streamlines(d.field.P, lat);
  const auto overlays = c.model.kind == ModelKind::ANNNI
                            ? annni_overlays(lat)
                            : std::vector<Polyline>{};
  run.write("streamlines.svg", streamlines_svg(lines, lat, overlays));
  run.time("outputs");

  std::size_t degenerate = 0;
  for (auto v : d.near_degenerate.data()) degenerate += v;
  run.finish({{"invalid_points", d.invalid_points},
              {"near_degenerate_points", degenerate}});
  return 0;
}

int cmd_order_param(const Flags& f) {
  Run run(f, "order-param");
  const RunConfig& c = run.cfg();
  json result;
  Observable obs;
  try {
    if (c.rho_plus && c.rho_minus) {
      const DensityMatrix plus(*c.rho_plus), minus(*c.rho_minus);
      if (f.gs_form) {
        obs = solve_two_state(plus, minus);
        result["mode"] = "two-state closed form";
      } else {
        obs = solve_order_parameter({plus, minus}, label_phases({M_PI / 2, -M_PI / 2}, 0.0, 0.5));
        result["mode"] = "two-state qcqp";
      }
    } else {
      const ParameterLattice lat = c.lattice();
      DiagramData d = compute_diagram(c.model, lat, sweep_options(c), c.rdm_sites,
                                      {c.observable_sites});
      run.time("diagram");
      OrderParamResult r = discover_order_parameter(
          d, c.observable_sites, c.eta, c.y_min, c.sample_region);
      obs = r.observable;
      result["mode"] = "phase diagram";
      result["eta"] = r.labels.eta;
      if (r.eta_choice) result["eta_margin"] = r.eta_choice->margin;
      result["y_min"] = r.labels.y_min;
      result["samples"] = r.samples.size();
      result["plus_count"] = r.labels.plus.size();
      result["minus_count"] = r.labels.minus.size();
      json plus = json::array(), minus = json::array();
      for (auto i : r.labels.plus) plus.push_back(r.samples[i]);
      for (auto i : r.labels.minus) minus.push_back(r.samples[i]);
      result["plus_points"] = plus;
      result["minus_points"] = minus;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotIndefinite)
      throw Error(e.code(), std::string(e.what()) + ". " + kNotIndefiniteText);
    throw;
  }
  json j = observable_json(obs);
  j["labels"] = result;
  j["config_hash"] = run.hash();
  run.write("observable.json", j.dump(2) + "\n");
  run.time("solve");
  run.finish();
  return 0;
}

int cmd_fss(const Flags& f) {
  Run run(f, "fss");
  const RunConfig& c = run.cfg();
  if (!c.fss) fail(ErrorCode::ConfigError, "config has no fss section");
  const FssResult r = run_fss(*c.fss, c.model, c.lanczos);
  run.time("fss");
  if (!c.fss->synthetic) run.write("fss.csv", fss_csv(r.data));
  json j = fss_fit_json(r.fit);
  j["lengths"] = c.fss->lengths;
  j["max_gradients"] = r.max_gradients;
  j["h_star"] = r.h_star;
  j["config_hash"] = run.hash();
  run.write("fit.json", j.dump(2) + "\n");
  run.finish({{"kappa", c.fss->kappa}, {"h_values", c.fss->h_values}});
  return 0;
}

int cmd_validate() {
  const auto checks = run_validation();
  std::cout << format_report(checks);
  for (const auto& c : checks)
    if (!c.pass) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase diagrams and order parameters from reduced fidelity susceptibility"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", f.config, "JSON run configuration");
    s->add_option("--out", f.out, "output directory");
    s->add_option("--threads", f.threads, "worker threads");
    s->add_option("--seed", f.seed, "solver seed");
  };
  auto* pd = app.add_subcommand("phase-diagram", "field CSV, angle PPM, streamline SVG");
  auto* op = app.add_subcommand("order-param", "observable JSON");
  auto* fs_cmd = app.add_subcommand("fss", "finite-size scaling CSV and fit JSON");
  auto* val = app.add_subcommand("validate", "oracle checks");
  add_common(pd);
  add_common(op);
  add_common(fs_cmd);
  op->add_flag("--gs-form", f.gs_form, "closed form for a two-state fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*pd) return cmd_phase_diagram(f);
    if (*op) return cmd_order_param(f);
    if (*fs_cmd) return cmd_fss(f);
    if (*val) return cmd_validate();
  } catch (const Error& e) {
    json err = {{"error", error_name(e.code())}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    json err = {{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
  return 0;
}
