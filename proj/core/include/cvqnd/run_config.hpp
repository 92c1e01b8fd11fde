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

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "cvqnd/gaussian_state.hpp"
#include "cvqnd/scheme.hpp"

namespace cvqnd {

struct Range {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;  // >= 2, endpoints included
};

using ScalarOrRange = std::variant<double, Range>;

enum class StateKind { Vacuum, Ghz, EprType, Explicit };
enum class SideSelection { Input, Output, Both };

struct McSettings {
  long samples = 0;
  std::uint64_t seed = 0;
};

/// Parsed form of the JSON run configuration. Keys: n, m, variant, t_o, s,
/// state, ancilla_squeeze_db, side, mc, alpha, beta, k_a, k_b; unknown keys
/// are rejected.
struct RunConfig {
  int n = 3;
  int m = 2;
  Variant variant = Variant::UniformLast;
  ScalarOrRange t_o{0.9};
  ScalarOrRange s{0.0};
  StateKind state_kind = StateKind::Vacuum;
  Eigen::MatrixXd explicit_cov;  // used when state_kind == Explicit
  double ancilla_squeeze_db = 60.0;
  SideSelection side = SideSelection::Input;
  std::optional<McSettings> mc;
  double alpha = 1.0;
  double beta = 1.0;
  double k_a = 1.0;
  double k_b = 1.0;
};

/// Squeezing parameter for a decibel figure: s = ln(10^{db/20}).
double db_to_squeezing(double db);

/// Parses and validates a configuration document. Throws
/// std::invalid_argument with a descriptive message on any violation.
RunConfig parse_run_config(const std::string& json_text);

/// Input state for one grid point (s is ignored for vacuum and explicit
/// covariance states).
GaussianState make_input_state(const RunConfig& config, double s);

/// SchemeConfig for one (t_o, s) grid point.
SchemeConfig make_scheme_config(const RunConfig& config, double t_o, double s);

std::vector<double> grid_values(const ScalarOrRange& value);

}  // namespace cvqnd
