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

#include "cvqnd/scan.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "cvqnd/entanglement.hpp"

namespace cvqnd {

namespace {

std::string format_value(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

ScanRow evaluate_point(const RunConfig& config, double t_o, double s) {
  SchemeConfig scheme = make_scheme_config(config, t_o, s);
  const CoefficientTable table = coefficient_table(scheme);

  ScanRow row;
  row.t_o = t_o;
  row.t_d = table.t_d;
  row.s = s;

  const bool input_side = config.side != SideSelection::Output;
  const bool output_side = config.side != SideSelection::Input;
  if (input_side) {
    const CertResult cert = certify(uv_input(scheme, table), *scheme.input_state);
    row.var_u = cert.var_u;
    row.var_v = cert.var_v;
    row.min_s_b = cert.min_s_b;
    row.ent_in = cert.ent;
    row.certified_in = cert.certified;
  }
  if (output_side) {
    const SchemeRun run = run_analytic(scheme);
    const CertResult cert = certify(uv_output(scheme, table), *run.output_state);
    if (!input_side) {
      row.var_u = cert.var_u;
      row.var_v = cert.var_v;
      row.min_s_b = cert.min_s_b;
    }
    row.ent_out = cert.ent;
    row.certified_out = cert.certified;
  }
  return row;
}

}  // namespace

std::vector<ScanRow> run_scan(const RunConfig& config, int threads) {
  const std::vector<double> t_values = grid_values(config.t_o);
  const std::vector<double> s_values = grid_values(config.s);
  const size_t total = t_values.size() * s_values.size();
  std::vector<ScanRow> rows(total);

  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(total)));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (size_t index = next.fetch_add(1); index < total;
         index = next.fetch_add(1)) {
      try {
        const double t_o = t_values[index / s_values.size()];
        const double s = s_values[index % s_values.size()];
        rows[index] = evaluate_point(config, t_o, s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "t_o,t_d,s,var_u,var_v,min_s_b,ent_in,ent_out,certified_in,"
         "certified_out\n";
  for (const ScanRow& row : rows) {
    out << format_value(row.t_o) << ',' << format_value(row.t_d) << ','
        << format_value(row.s) << ',' << format_value(row.var_u) << ','
        << format_value(row.var_v) << ',' << format_value(row.min_s_b) << ',';
    if (row.ent_in) out << format_value(*row.ent_in);
    out << ',';
    if (row.ent_out) out << format_value(*row.ent_out);
    out << ',';
    if (row.certified_in) out << (*row.certified_in ? "true" : "false");
    out << ',';
    if (row.certified_out) out << (*row.certified_out ? "true" : "false");
    out << '\n';
  }
}

}  // namespace cvqnd
