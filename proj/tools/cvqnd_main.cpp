// Copyright 2026 The cvqnd Authors
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

// Command-line front end: `verify` drives the identity suite, `scan` sweeps a
// (t_o, s) grid into a CSV, `run` reports a single configuration as JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>

#include "cvqnd/entanglement.hpp"
#include "cvqnd/run_config.hpp"
#include "cvqnd/scan.hpp"
#include "cvqnd/verify.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ordered_json form_json(const cvqnd::LinearForm& form) {
  const int slots = form.n_slots();
  ordered_json node;
  ordered_json q = ordered_json::array();
  ordered_json p = ordered_json::array();
  for (int slot = 0; slot < slots; ++slot) {
    q.push_back(form.coeff_at(slot, cvqnd::Axis::Q));
    p.push_back(form.coeff_at(slot, cvqnd::Axis::P));
  }
  node["q"] = std::move(q);
  node["p"] = std::move(p);
  return node;
}

ordered_json cert_json(const cvqnd::CertResult& cert) {
  ordered_json node;
  node["var_u"] = cert.var_u;
  node["var_v"] = cert.var_v;
  node["min_s_b"] = cert.min_s_b;
  node["ent"] = cert.ent;
  node["certified"] = cert.certified;
  ordered_json argmin = ordered_json::array();
  for (const auto& bipartition : cert.argmin) {
    argmin.push_back(bipartition.left_modes());
  }
  node["argmin_left_sides"] = std::move(argmin);
  if (!cert.s_b_all.empty() && cert.s_b_all.size() <= 127) {
    ordered_json all = ordered_json::array();
    for (const auto& [bipartition, value] : cert.s_b_all) {
      ordered_json entry;
      entry["left"] = bipartition.left_modes();
      entry["s_b"] = value;
      all.push_back(std::move(entry));
    }
    node["s_b_all"] = std::move(all);
  }
  return node;
}

ordered_json scalar_or_range_json(const cvqnd::ScalarOrRange& value) {
  if (const double* scalar = std::get_if<double>(&value)) return *scalar;
  const auto& range = std::get<cvqnd::Range>(value);
  return ordered_json{{"min", range.min}, {"max", range.max}, {"steps", range.steps}};
}

ordered_json config_json(const cvqnd::RunConfig& config) {
  ordered_json node;
  node["n"] = config.n;
  node["m"] = config.m;
  node["variant"] =
      config.variant == cvqnd::Variant::UniformLast ? "uniform-last" : "alt-bn";
  node["t_o"] = scalar_or_range_json(config.t_o);
  node["s"] = scalar_or_range_json(config.s);
  switch (config.state_kind) {
    case cvqnd::StateKind::Vacuum:
      node["state"] = "vacuum";
      break;
    case cvqnd::StateKind::Ghz:
      node["state"] = "ghz";
      break;
    case cvqnd::StateKind::EprType:
      node["state"] = "epr-type";
      break;
    case cvqnd::StateKind::Explicit:
      node["state"] = "explicit-covariance";
      break;
  }
  node["ancilla_squeeze_db"] = config.ancilla_squeeze_db;
  node["side"] = config.side == cvqnd::SideSelection::Input    ? "input"
                 : config.side == cvqnd::SideSelection::Output ? "output"
                                                               : "both";
  node["alpha"] = config.alpha;
  node["beta"] = config.beta;
  node["k_a"] = config.k_a;
  node["k_b"] = config.k_b;
  if (config.mc) {
    node["mc"] = ordered_json{{"samples", config.mc->samples},
                              {"seed", config.mc->seed}};
  }
  return node;
}

int cmd_verify(double perturb, int extra_n, int extra_m) {
  cvqnd::VerifyOptions options;
  options.perturb_t_d = perturb;
  if (extra_n > 0 || extra_m > 0) {
    if (extra_n <= 0 || extra_m <= 0) {
      std::cerr << "error: --n and --m must be given together\n";
      return 2;
    }
    options.extra_nm = {extra_n, extra_m};
  }
  const cvqnd::VerifyReport report = cvqnd::run_verify(options);
  const bool pass = cvqnd::print_verify_report(std::cout, report);
  return pass ? 0 : 1;
}

int cmd_scan(const std::string& config_path, const std::string& output_path,
             int threads) {
  const cvqnd::RunConfig config = cvqnd::parse_run_config(read_file(config_path));
  const std::vector<cvqnd::ScanRow> rows = cvqnd::run_scan(config, threads);
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + output_path + "'");
  }
  cvqnd::write_scan_csv(out, rows);
  if (!out.good()) {
    throw std::runtime_error("writing '" + output_path + "' failed");
  }
  return 0;
}

int cmd_run(const std::string& config_path) {
  const cvqnd::RunConfig config = cvqnd::parse_run_config(read_file(config_path));
  if (std::holds_alternative<cvqnd::Range>(config.t_o) ||
      std::holds_alternative<cvqnd::Range>(config.s)) {
    throw std::runtime_error(
        "run expects scalar t_o and s; use the scan subcommand for ranges");
  }
  const double t_o = std::get<double>(config.t_o);
  const double s = std::get<double>(config.s);
  cvqnd::SchemeConfig scheme = cvqnd::make_scheme_config(config, t_o, s);
  const cvqnd::CoefficientTable table = cvqnd::coefficient_table(scheme);
  const cvqnd::SchemeRun run = cvqnd::run_analytic(scheme);

  ordered_json report;
  report["config"] = config_json(config);
  report["coefficients"] = {{"t_d", table.t_d},
                            {"r_d", table.r_d},
                            {"f", table.f},
                            {"g", table.g},
                            {"qnd_gains", table.qnd_gains}};
  report["readout_forms"] = {{"p_a", form_json(run.readout_p_a)},
                             {"q_b", form_json(run.readout_q_b)}};
  ordered_json outputs = ordered_json::array();
  for (int j = 0; j < scheme.n; ++j) {
    ordered_json entry;
    entry["mode"] = j + 1;
    entry["q"] = form_json(run.out_q[j]);
    entry["p"] = form_json(run.out_p[j]);
    outputs.push_back(std::move(entry));
  }
  report["output_forms"] = std::move(outputs);
  report["readout_variances"] = {{"var_p_a", run.var_p_a},
                                 {"var_q_b", run.var_q_b}};

  ordered_json certification;
  if (config.side != cvqnd::SideSelection::Output) {
    certification["input"] =
        cert_json(certify(uv_input(scheme, table), *scheme.input_state));
  }
  if (config.side != cvqnd::SideSelection::Input) {
    certification["output"] =
        cert_json(certify(uv_output(scheme, table), *run.output_state));
  }
  report["certification"] = std::move(certification);

  if (config.mc) {
    const cvqnd::MonteCarloResult mc =
        cvqnd::run_monte_carlo(scheme, config.mc->samples, config.mc->seed);
    ordered_json node;
    node["samples"] = mc.samples;
    node["seed"] = config.mc->seed;
    node["mean"] = std::vector<double>(mc.mean.data(),
                                       mc.mean.data() + mc.mean.size());
    ordered_json cov = ordered_json::array();
    ordered_json stderr_cov = ordered_json::array();
    const double n_samples = static_cast<double>(mc.samples);
    for (int i = 0; i < mc.cov.rows(); ++i) {
      ordered_json row = ordered_json::array();
      ordered_json err_row = ordered_json::array();
      for (int j = 0; j < mc.cov.cols(); ++j) {
        row.push_back(mc.cov(i, j));
        const double scatter = mc.mean_sample_cov(i, i) * mc.mean_sample_cov(j, j) +
                               mc.mean_sample_cov(i, j) * mc.mean_sample_cov(i, j);
        err_row.push_back(std::sqrt(std::max(scatter, 0.0) / n_samples));
      }
      cov.push_back(std::move(row));
      stderr_cov.push_back(std::move(err_row));
    }
    node["cov"] = std::move(cov);
    node["cov_standard_error"] = std::move(stderr_cov);
    report["monte_carlo"] = std::move(node);
  }

  std::cout << report.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and certification toolkit for measurement-mediated "
               "multipartite quantum-nondemolition interaction"};
  app.require_subcommand(1);

  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  app.add_option("--threads", threads, "worker threads for grid scans")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run the identity suite");
  double perturb = 0.0;
  int extra_n = 0, extra_m = 0;
  verify->add_option("--perturb-td", perturb,
                     "shift t_d in the compatibility identities (sanity check)");
  verify->add_option("--n", extra_n, "additional configuration: target count");
  verify->add_option("--m", extra_m, "additional configuration: crossover index");

  auto* scan = app.add_subcommand("scan", "sweep a (t_o, s) grid into a CSV");
  std::string scan_config, scan_output;
  scan->add_option("config", scan_config, "JSON configuration file")->required();
  scan->add_option("-o,--output", scan_output, "output CSV path")->required();

  auto* run = app.add_subcommand("run", "evaluate one configuration, JSON out");
  std::string run_config;
  run->add_option("config", run_config, "JSON configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(perturb, extra_n, extra_m);
    if (scan->parsed()) return cmd_scan(scan_config, scan_output, threads);
    if (run->parsed()) return cmd_run(run_config);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
