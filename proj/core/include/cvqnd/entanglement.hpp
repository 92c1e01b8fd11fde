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
#include <utility>
#include <vector>

#include "cvqnd/gaussian_state.hpp"
#include "cvqnd/scheme.hpp"

namespace cvqnd {

// Variance-sum witness over conjugate collective quadratures
// u = sum_j a_j p_j and v = sum_j b_j q_j: any biseparable state obeys
// Var(u) + Var(v) >= 2 min over bipartitions of S_B, so a ratio below one
// certifies genuine multipartite entanglement.

enum class Side { Input, Output };

/// Coefficient vectors of the witness pair; a over momenta, b over positions.
struct UVSpec {
  Side side = Side::Input;
  Eigen::VectorXd a;
  Eigen::VectorXd b;

  int n_modes() const { return static_cast<int>(a.size()); }
};

/// A split of modes 1..N into two nonempty groups, canonicalized so that
/// mode 1 sits on the left. Bit j-1 of the mask marks mode j as left.
class Bipartition {
 public:
  Bipartition(std::uint32_t left_mask, int n_modes);

  std::uint32_t left_mask() const { return left_mask_; }
  int n_modes() const { return n_modes_; }
  bool on_left(int mode) const {  // 1-based
    return (left_mask_ >> (mode - 1)) & 1u;
  }
  std::vector<int> left_modes() const;
  std::vector<int> right_modes() const;

  static std::vector<Bipartition> enumerate(int n_modes);

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  std::uint32_t left_mask_;
  int n_modes_;
};

/// Bipartitions with their S_B values are recorded in CertResult only up to
/// this mode count; the minimum itself is computed for any n <= 32.
inline constexpr int kMaxRecordedBipartitionModes = 16;

struct CertResult {
  double var_u = 0.0;
  double var_v = 0.0;
  std::vector<std::pair<Bipartition, double>> s_b_all;
  double min_s_b = 0.0;
  std::vector<Bipartition> argmin;
  double ent = 0.0;
  bool certified = false;
};

/// Input-side witness coefficients from the readout tables:
/// a = (f_1, ..., f_{N-1}, -f_N) * sqrt(alpha),
/// b = (g_1, ..., g_{N-1}, -g_N) * sqrt(beta).
UVSpec uv_input(const SchemeConfig& config, const CoefficientTable& table);

/// Output-side witness coefficients:
/// a = (f_1, ..., f_{N-1}, (r_d^2 - t_d^2) f_N),
/// b = ((r_d^2 - t_d^2) g_1, ..., (r_d^2 - t_d^2) g_{N-1}, g_N).
UVSpec uv_output(const SchemeConfig& config, const CoefficientTable& table);

/// |sum over left of a_k b_k| + |sum over right of a_k b_k|.
double s_b(const UVSpec& spec, const Bipartition& bipartition);

struct MinSB {
  double value = 0.0;
  std::vector<Bipartition> argmin;  // every tie, unordered contract
};

/// Exhaustive minimum over all 2^{N-1} - 1 canonical bipartitions.
MinSB min_s_b(const UVSpec& spec);

/// Closed-form minimum: input side 2 sqrt(alpha beta) min(|f_1 g_1|,
/// |f_{N-1} g_{N-1}|), output side the same with |r_d^2 - t_d^2| in place of
/// sqrt(alpha beta). Cross-checked against the exhaustive minimum; a
/// disagreement beyond 1e-10 throws std::logic_error.
double min_s_b_closed(const SchemeConfig& config, Side side);

/// Witness quadratures as forms over the N-mode basis of the given state
/// (input state for Side::Input, the run's output state for Side::Output).
LinearForm u_form(const UVSpec& spec);
LinearForm v_form(const UVSpec& spec);

/// Evaluates the witness: variances of u and v against the state, exhaustive
/// minimum, ratio, and the certified flag (ratio < 1).
CertResult certify(const UVSpec& spec, const GaussianState& state);

}  // namespace cvqnd
