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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cvqnd {

struct IdentityResult {
  std::string name;
  double deviation = 0.0;  // largest observed deviation in the identity's units
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  double perturb_t_d = 0.0;  // shifts t_d in the compatibility identities
  std::optional<std::pair<int, int>> extra_nm;  // additional (n, m) to check
  long mc_samples = 20000;
  std::uint64_t mc_seed = 0x5eed0001;
};

struct VerifyReport {
  std::vector<IdentityResult> identities;
  bool all_pass = true;
};

/// Runs the full identity suite: compatibility roots, coefficient tables,
/// closed output forms, witness minimization cross-checks, the ideal-coupling
/// limit, and trajectory-versus-analytic statistics.
VerifyReport run_verify(const VerifyOptions& options = {});

/// One line per identity plus a summary; returns report.all_pass.
bool print_verify_report(std::ostream& out, const VerifyReport& report);

}  // namespace cvqnd
