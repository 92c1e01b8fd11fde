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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cvqnd/scan.hpp"
#include "cvqnd/verify.hpp"

using namespace cvqnd;

TEST_CASE("decibel conversion") {
  CHECK(db_to_squeezing(60.0) == doctest::Approx(std::log(1000.0)));
  CHECK(db_to_squeezing(0.0) == 0.0);
}

TEST_CASE("configuration parsing accepts the documented schema") {
  const RunConfig config = parse_run_config(R"({
    "n": 3, "m": 2, "variant": "alt-bn",
    "t_o": {"min": 0.5, "max": 0.999, "steps": 10},
    "s": 1.0,
    "state": "ghz",
    "ancilla_squeeze_db": 45,
    "side": "both",
    "mc": {"samples": 100, "seed": 7},
    "alpha": 2.0, "beta": 2.0, "k_a": 1.5, "k_b": 0.5
  })");
  CHECK(config.n == 3);
  CHECK(config.variant == Variant::AltBn);
  CHECK(std::get<Range>(config.t_o).steps == 10);
  CHECK(std::get<double>(config.s) == 1.0);
  CHECK(config.state_kind == StateKind::Ghz);
  CHECK(config.side == SideSelection::Both);
  REQUIRE(config.mc.has_value());
  CHECK(config.mc->samples == 100);
  CHECK(config.mc->seed == 7);
  CHECK(grid_values(config.t_o).size() == 10);
  CHECK(grid_values(config.t_o).front() == 0.5);
  CHECK(grid_values(config.t_o).back() == 0.999);
}

TEST_CASE("configuration parsing rejects malformed documents") {
  CHECK_THROWS_AS(parse_run_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 3, "m": 2, "typo": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_run_config(R"({"n": 3, "m": 2, "t_o": {"min": 0.9, "max": 0.5, "steps": 5}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_run_config(R"({"n": 3, "m": 2, "s": {"min": 0, "max": 1, "steps": 1}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 3, "m": 2, "variant": "other"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 3, "m": 2, "state": "w-state"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 4, "m": 2, "variant": "alt-bn"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 3, "m": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"n": 3, "m": 2, "mc": {"samples": 0}})"),
                  std::invalid_argument);
  // Unphysical explicit covariance (negative variance block).
  CHECK_THROWS_AS(parse_run_config(R"({
    "n": 2, "m": 1,
    "state": [[0.1,0,0,0],[0,0.1,0,0],[0,0,1,0],[0,0,0,1]]
  })"),
                  std::invalid_argument);
  // Explicit covariance with a ranged s is ambiguous.
  CHECK_THROWS_AS(parse_run_config(R"({
    "n": 2, "m": 1, "s": {"min": 0, "max": 1, "steps": 3},
    "state": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]
  })"),
                  std::invalid_argument);
}

TEST_CASE("explicit covariance states pass through") {
  const RunConfig config = parse_run_config(R"({
    "n": 2, "m": 1,
    "state": [[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]
  })");
  const GaussianState state = make_input_state(config, 0.0);
  CHECK(state.cov()(0, 0) == 2.0);
}

TEST_CASE("scan rows are ordered, deterministic and self-consistent") {
  const RunConfig config = parse_run_config(R"({
    "n": 3, "m": 2, "state": "epr-type", "side": "both",
    "t_o": {"min": 0.7, "max": 0.95, "steps": 4},
    "s": {"min": 0.0, "max": 1.5, "steps": 3}
  })");
  const std::vector<ScanRow> rows = run_scan(config, 1);
  REQUIRE(rows.size() == 12);
  for (size_t i = 1; i < rows.size(); ++i) {
    const bool ordered = rows[i].t_o > rows[i - 1].t_o ||
                         (rows[i].t_o == rows[i - 1].t_o &&
                          rows[i].s > rows[i - 1].s);
    CHECK(ordered);
  }
  for (const ScanRow& row : rows) {
    CHECK(row.t_d ==
          doctest::Approx(row.t_o * row.t_o).epsilon(1e-13));  // (3, 2) setup
    REQUIRE(row.ent_in.has_value());
    REQUIRE(row.ent_out.has_value());
    CHECK(*row.ent_in > 0.0);
    // Stored ratio re-derives from the stored pieces (input side for "both").
    CHECK(*row.ent_in ==
          doctest::Approx((row.var_u + row.var_v) / (2.0 * row.min_s_b))
              .epsilon(1e-12));
    // No squeezing, no certification.
    if (row.s == 0.0) CHECK(!*row.certified_in);
  }

  // Thread count must not affect anything.
  const std::vector<ScanRow> parallel = run_scan(config, 4);
  std::ostringstream a, b;
  write_scan_csv(a, rows);
  write_scan_csv(b, parallel);
  CHECK(a.str() == b.str());
}

TEST_CASE("CSV layout") {
  const RunConfig config = parse_run_config(R"({
    "n": 3, "m": 2, "state": "ghz", "side": "input",
    "t_o": 0.9, "s": 1.0
  })");
  const std::vector<ScanRow> rows = run_scan(config, 1);
  REQUIRE(rows.size() == 1);
  std::ostringstream out;
  write_scan_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.rfind("t_o,t_d,s,var_u,var_v,min_s_b,ent_in,ent_out,certified_in,"
                   "certified_out\n",
                   0) == 0);
  CHECK(text.find("\r") == std::string::npos);
  // Output-side cells stay empty on an input-side scan.
  const std::string row_line = text.substr(text.find('\n') + 1);
  CHECK(row_line.find(",,") != std::string::npos);
  CHECK(row_line.rfind(",\n") == row_line.size() - 2);
  CHECK(row_line.rfind("0.9,0.81,1,", 0) == 0);
}

TEST_CASE("12 significant digit formatting") {
  ScanRow row;
  row.t_o = 0.123456789012345;
  row.t_d = 1.0 / 3.0;
  row.s = 2.0;
  row.var_u = row.var_v = row.min_s_b = 1.0;
  std::ostringstream out;
  write_scan_csv(out, {row});
  CHECK(out.str().find("0.123456789012,") != std::string::npos);
  CHECK(out.str().find("0.333333333333,") != std::string::npos);
}

TEST_CASE("output-side scans leave input columns empty") {
  const RunConfig config = parse_run_config(R"({
    "n": 3, "m": 2, "state": "epr-type", "side": "output",
    "t_o": 0.9, "s": 1.2, "ancilla_squeeze_db": 30
  })");
  const std::vector<ScanRow> rows = run_scan(config, 1);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].ent_in.has_value());
  REQUIRE(rows[0].ent_out.has_value());
  CHECK(*rows[0].ent_out ==
        doctest::Approx((rows[0].var_u + rows[0].var_v) /
                        (2.0 * rows[0].min_s_b))
            .epsilon(1e-12));
}

TEST_CASE("identity suite passes by default and fails under perturbation") {
  const VerifyReport report = run_verify({});
  CHECK(report.all_pass);
  CHECK(report.identities.size() >= 40);
  for (const IdentityResult& identity : report.identities) {
    CHECK(identity.pass);
  }

  VerifyOptions shifted;
  shifted.perturb_t_d = 0.01;
  const VerifyReport broken = run_verify(shifted);
  CHECK(!broken.all_pass);

  std::ostringstream out;
  CHECK(print_verify_report(out, report));
  CHECK(out.str().find("[PASS]") != std::string::npos);
  CHECK(out.str().find("[FAIL]") == std::string::npos);
}
