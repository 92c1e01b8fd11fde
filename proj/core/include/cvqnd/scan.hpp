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

#include <optional>
#include <ostream>
#include <vector>

#include "cvqnd/run_config.hpp"

namespace cvqnd {

/// One grid point of a (t_o, s) sweep. var_u, var_v and min_s_b describe the
/// input-side witness unless only the output side was requested.
struct ScanRow {
  double t_o = 0.0;
  double t_d = 0.0;
  double s = 0.0;
  double var_u = 0.0;
  double var_v = 0.0;
  double min_s_b = 0.0;
  std::optional<double> ent_in;
  std::optional<double> ent_out;
  std::optional<bool> certified_in;
  std::optional<bool> certified_out;
};

/// Evaluates the grid in (t_o, s) lexicographic order. Grid points are
/// independent; up to `threads` of them run concurrently, the row order is
/// deterministic regardless.
std::vector<ScanRow> run_scan(const RunConfig& config, int threads = 1);

/// CSV with the fixed header
/// t_o,t_d,s,var_u,var_v,min_s_b,ent_in,ent_out,certified_in,certified_out,
/// 12 significant digits, '\n' newlines, empty cells for the unselected side.
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

}  // namespace cvqnd
