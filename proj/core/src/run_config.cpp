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

#include "cvqnd/run_config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace cvqnd {

namespace {

using nlohmann::json;

ScalarOrRange parse_scalar_or_range(const json& node, const std::string& key) {
  if (node.is_number()) {
    return node.get<double>();
  }
  if (node.is_object()) {
    for (const auto& item : node.items()) {
      if (item.key() != "min" && item.key() != "max" && item.key() != "steps") {
        throw std::invalid_argument("config: unknown key '" + key + "." +
                                    item.key() + "'");
      }
    }
    if (!node.contains("min") || !node.contains("max") || !node.contains("steps")) {
      throw std::invalid_argument("config: range for '" + key +
                                  "' needs min, max, steps");
    }
    Range range;
    range.min = node.at("min").get<double>();
    range.max = node.at("max").get<double>();
    range.steps = node.at("steps").get<int>();
    if (range.steps < 2) {
      throw std::invalid_argument("config: '" + key + ".steps' must be >= 2");
    }
    if (!(range.min < range.max)) {
      throw std::invalid_argument("config: '" + key + "' needs min < max");
    }
    return range;
  }
  throw std::invalid_argument("config: '" + key + "' must be a number or range");
}

Eigen::MatrixXd parse_covariance(const json& node, int n) {
  if (!node.is_array() || node.size() != static_cast<size_t>(2 * n)) {
    throw std::invalid_argument(
        "config: explicit covariance must be a 2n x 2n array of rows");
  }
  Eigen::MatrixXd cov(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    const json& row = node.at(static_cast<size_t>(i));
    if (!row.is_array() || row.size() != static_cast<size_t>(2 * n)) {
      throw std::invalid_argument("config: covariance row has wrong length");
    }
    for (int j = 0; j < 2 * n; ++j) {
      cov(i, j) = row.at(static_cast<size_t>(j)).get<double>();
    }
  }
  return cov;
}

}  // namespace

double db_to_squeezing(double db) { return std::log(std::pow(10.0, db / 20.0)); }

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                err.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  static const std::set<std::string> known = {
      "n",  "m",  "variant", "t_o",   "s",    "state", "ancilla_squeeze_db",
      "side", "mc", "alpha",  "beta",  "k_a",  "k_b"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) {
      throw std::invalid_argument("config: unknown key '" + item.key() + "'");
    }
  }
  if (!doc.contains("n") || !doc.contains("m")) {
    throw std::invalid_argument("config: 'n' and 'm' are required");
  }

  RunConfig config;
  config.n = doc.at("n").get<int>();
  config.m = doc.at("m").get<int>();
  if (doc.contains("variant")) {
    const std::string name = doc.at("variant").get<std::string>();
    if (name == "uniform-last") {
      config.variant = Variant::UniformLast;
    } else if (name == "alt-bn") {
      config.variant = Variant::AltBn;
    } else {
      throw std::invalid_argument("config: variant must be 'uniform-last' or 'alt-bn'");
    }
  }
  if (doc.contains("t_o")) config.t_o = parse_scalar_or_range(doc.at("t_o"), "t_o");
  if (doc.contains("s")) config.s = parse_scalar_or_range(doc.at("s"), "s");
  if (doc.contains("state")) {
    const json& state = doc.at("state");
    if (state.is_string()) {
      const std::string name = state.get<std::string>();
      if (name == "vacuum") {
        config.state_kind = StateKind::Vacuum;
      } else if (name == "ghz") {
        config.state_kind = StateKind::Ghz;
      } else if (name == "epr-type") {
        config.state_kind = StateKind::EprType;
      } else {
        throw std::invalid_argument(
            "config: state must be 'vacuum', 'ghz', 'epr-type' or a covariance");
      }
    } else {
      config.state_kind = StateKind::Explicit;
      config.explicit_cov = parse_covariance(state, config.n);
    }
  }
  if (doc.contains("ancilla_squeeze_db")) {
    config.ancilla_squeeze_db = doc.at("ancilla_squeeze_db").get<double>();
  }
  if (doc.contains("side")) {
    const std::string name = doc.at("side").get<std::string>();
    if (name == "input") {
      config.side = SideSelection::Input;
    } else if (name == "output") {
      config.side = SideSelection::Output;
    } else if (name == "both") {
      config.side = SideSelection::Both;
    } else {
      throw std::invalid_argument("config: side must be 'input', 'output' or 'both'");
    }
  }
  if (doc.contains("mc")) {
    const json& mc = doc.at("mc");
    for (const auto& item : mc.items()) {
      if (item.key() != "samples" && item.key() != "seed") {
        throw std::invalid_argument("config: unknown key 'mc." + item.key() + "'");
      }
    }
    McSettings settings;
    settings.samples = mc.at("samples").get<long>();
    settings.seed = mc.value("seed", std::uint64_t{1});
    if (settings.samples < 1) {
      throw std::invalid_argument("config: mc.samples must be >= 1");
    }
    config.mc = settings;
  }
  if (doc.contains("alpha")) config.alpha = doc.at("alpha").get<double>();
  if (doc.contains("beta")) config.beta = doc.at("beta").get<double>();
  if (doc.contains("k_a")) config.k_a = doc.at("k_a").get<double>();
  if (doc.contains("k_b")) config.k_b = doc.at("k_b").get<double>();

  // Surface bad combinations at parse time rather than mid-scan.
  if (config.state_kind == StateKind::Explicit &&
      std::holds_alternative<Range>(config.s)) {
    throw std::invalid_argument(
        "config: an explicit covariance state needs a scalar 's'");
  }
  if (config.state_kind == StateKind::EprType && config.n < 3) {
    throw std::invalid_argument("config: epr-type state needs n >= 3");
  }
  make_scheme_config(*&config, grid_values(config.t_o).front(),
                     grid_values(config.s).front())
      .validate();
  if (config.state_kind == StateKind::Explicit) {
    const GaussianState state(Eigen::VectorXd::Zero(2 * config.n),
                              config.explicit_cov);
    if (!is_physical(state)) {
      throw std::invalid_argument("config: explicit covariance is not physical");
    }
  }
  return config;
}

GaussianState make_input_state(const RunConfig& config, double s) {
  switch (config.state_kind) {
    case StateKind::Vacuum:
      return vacuum(config.n);
    case StateKind::Ghz:
      return ghz_state(config.n, s);
    case StateKind::EprType:
      return epr_type_state(config.n, s);
    case StateKind::Explicit:
      return GaussianState(Eigen::VectorXd::Zero(2 * config.n),
                           config.explicit_cov);
  }
  throw std::logic_error("make_input_state: unreachable");
}

SchemeConfig make_scheme_config(const RunConfig& config, double t_o, double s) {
  SchemeConfig scheme;
  scheme.n = config.n;
  scheme.m = config.m;
  scheme.t_o = t_o;
  scheme.variant = config.variant;
  scheme.s_a = db_to_squeezing(config.ancilla_squeeze_db);
  scheme.s_b = scheme.s_a;
  scheme.input_state = make_input_state(config, s);
  scheme.k_a = config.k_a;
  scheme.k_b = config.k_b;
  scheme.alpha = config.alpha;
  scheme.beta = config.beta;
  return scheme;
}

std::vector<double> grid_values(const ScalarOrRange& value) {
  if (const double* scalar = std::get_if<double>(&value)) {
    return {*scalar};
  }
  const Range& range = std::get<Range>(value);
  std::vector<double> values(static_cast<size_t>(range.steps));
  for (int i = 0; i < range.steps; ++i) {
    values[static_cast<size_t>(i)] =
        range.min + (range.max - range.min) * i / (range.steps - 1);
  }
  values.back() = range.max;  // exact endpoint, no rounding drift
  return values;
}

}  // namespace cvqnd
