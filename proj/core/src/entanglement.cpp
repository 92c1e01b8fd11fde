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

#include "cvqnd/entanglement.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "wide_float.hpp"

namespace cvqnd {

Bipartition::Bipartition(std::uint32_t left_mask, int n_modes)
    : left_mask_(left_mask), n_modes_(n_modes) {
  if (n_modes < 2 || n_modes > kMaxTargetModes) {
    throw std::invalid_argument("Bipartition: mode count out of range");
  }
  const std::uint32_t full =
      n_modes == 32 ? ~0u : ((1u << n_modes) - 1u);
  if ((left_mask & ~full) != 0u || left_mask == 0u || left_mask == full) {
    throw std::invalid_argument("Bipartition: sides must be nonempty and proper");
  }
  if ((left_mask & 1u) == 0u) {
    throw std::invalid_argument("Bipartition: canonical form keeps mode 1 left");
  }
}

std::vector<int> Bipartition::left_modes() const {
  std::vector<int> modes;
  for (int j = 1; j <= n_modes_; ++j) {
    if (on_left(j)) modes.push_back(j);
  }
  return modes;
}

std::vector<int> Bipartition::right_modes() const {
  std::vector<int> modes;
  for (int j = 1; j <= n_modes_; ++j) {
    if (!on_left(j)) modes.push_back(j);
  }
  return modes;
}

std::vector<Bipartition> Bipartition::enumerate(int n_modes) {
  if (n_modes < 2 || n_modes > kMaxRecordedBipartitionModes) {
    throw std::invalid_argument("Bipartition::enumerate: mode count out of range");
  }
  std::vector<Bipartition> all;
  const std::uint32_t count = 1u << (n_modes - 1);
  all.reserve(count - 1);
  for (std::uint32_t rest = 0; rest + 1 < count; ++rest) {
    all.emplace_back(1u | (rest << 1), n_modes);
  }
  return all;
}

UVSpec uv_input(const SchemeConfig& config, const CoefficientTable& table) {
  const int n = config.n;
  UVSpec spec;
  spec.side = Side::Input;
  spec.a.resize(n);
  spec.b.resize(n);
  const double sa = std::sqrt(config.alpha);
  const double sb = std::sqrt(config.beta);
  for (int j = 0; j < n; ++j) {
    const double sign = (j == n - 1) ? -1.0 : 1.0;
    spec.a[j] = sign * sa * table.f[j];
    spec.b[j] = sign * sb * table.g[j];
  }
  return spec;
}

UVSpec uv_output(const SchemeConfig& config, const CoefficientTable& table) {
  const int n = config.n;
  const double back = table.r_d * table.r_d - table.t_d * table.t_d;
  UVSpec spec;
  spec.side = Side::Output;
  spec.a.resize(n);
  spec.b.resize(n);
  for (int j = 0; j < n - 1; ++j) {
    spec.a[j] = table.f[j];
    spec.b[j] = back * table.g[j];
  }
  spec.a[n - 1] = back * table.f[n - 1];
  spec.b[n - 1] = table.g[n - 1];
  return spec;
}

double s_b(const UVSpec& spec, const Bipartition& bipartition) {
  using internal::wide_float;
  if (bipartition.n_modes() != spec.n_modes()) {
    throw std::invalid_argument("s_b: bipartition size mismatch");
  }
  wide_float left = 0;
  wide_float right = 0;
  for (int j = 1; j <= spec.n_modes(); ++j) {
    const wide_float product = static_cast<wide_float>(spec.a[j - 1]) *
                               static_cast<wide_float>(spec.b[j - 1]);
    (bipartition.on_left(j) ? left : right) += product;
  }
  const auto wide_abs = [](wide_float x) { return x < 0 ? -x : x; };
  return static_cast<double>(wide_abs(left) + wide_abs(right));
}

MinSB min_s_b(const UVSpec& spec) {
  using internal::wide_float;
  const int n = spec.n_modes();
  if (n < 2 || n > kMaxTargetModes) {
    throw std::invalid_argument("min_s_b: mode count out of range");
  }
  // Products can span many orders of magnitude, so the incremental walk runs
  // in extended precision to keep small cut values exact.
  std::vector<wide_float> products(static_cast<size_t>(n));
  wide_float total = 0;
  for (int j = 0; j < n; ++j) {
    products[static_cast<size_t>(j)] =
        static_cast<wide_float>(spec.a[j]) * static_cast<wide_float>(spec.b[j]);
    total += products[static_cast<size_t>(j)];
  }
  const auto wide_abs = [](wide_float x) { return x < 0 ? -x : x; };

  // Gray-code walk over the subsets joined to mode 1; each step moves one
  // mode across the cut. The all-left subset shows up mid-sequence and is
  // skipped (its complement would be empty).
  const std::uint64_t count = 1ull << (n - 1);
  const std::uint32_t all_rest = static_cast<std::uint32_t>(count - 1);
  wide_float left = products[0];
  std::uint32_t gray_prev = 0;
  wide_float best = wide_abs(left) + wide_abs(total - left);
  std::vector<std::uint32_t> argmin_masks{1u};
  for (std::uint64_t i = 1; i < count; ++i) {
    const std::uint32_t gray =
        static_cast<std::uint32_t>(i ^ (i >> 1));
    const std::uint32_t flipped = gray ^ gray_prev;
    const int idx = std::countr_zero(flipped) + 1;  // 0-based mode index
    if (gray & flipped) {
      left += products[static_cast<size_t>(idx)];
    } else {
      left -= products[static_cast<size_t>(idx)];
    }
    gray_prev = gray;
    if (gray == all_rest) continue;
    const wide_float value = wide_abs(left) + wide_abs(total - left);
    const wide_float tie_tol =
        1e-12 * (best > 1 ? best : static_cast<wide_float>(1));
    if (value < best - tie_tol) {
      best = value;
      argmin_masks.assign(1, 1u | (gray << 1));
    } else if (value <= best + tie_tol) {
      argmin_masks.push_back(1u | (gray << 1));
    }
  }

  // A late, lower best can leave stale near-ties in the list; re-filter.
  MinSB result;
  result.value = static_cast<double>(best);
  const double tie_tol = 1e-12 * std::max(1.0, result.value);
  for (std::uint32_t mask : argmin_masks) {
    const Bipartition candidate(mask, n);
    if (s_b(spec, candidate) <= result.value + tie_tol) {
      result.argmin.push_back(candidate);
    }
  }
  return result;
}

double min_s_b_closed(const SchemeConfig& config, Side side) {
  const CoefficientTable table = coefficient_table(config);
  const int n = config.n;
  const double edge = std::min(std::abs(table.f[0] * table.g[0]),
                               std::abs(table.f[n - 2] * table.g[n - 2]));
  double closed = 0.0;
  UVSpec spec;
  if (side == Side::Input) {
    closed = 2.0 * std::sqrt(config.alpha * config.beta) * edge;
    spec = uv_input(config, table);
  } else {
    const double back = table.r_d * table.r_d - table.t_d * table.t_d;
    closed = 2.0 * std::abs(back) * edge;
    spec = uv_output(config, table);
  }
  const double brute = min_s_b(spec).value;
  if (std::abs(brute - closed) > 1e-10 * std::max(1.0, std::abs(closed))) {
    throw std::logic_error(
        "min_s_b_closed: closed form disagrees with the exhaustive minimum");
  }
  return closed;
}

LinearForm u_form(const UVSpec& spec) {
  LinearForm form(spec.n_modes());
  for (int j = 1; j <= spec.n_modes(); ++j) {
    form.set_coeff(ModeLabel::target(j), Axis::P, spec.a[j - 1]);
  }
  return form;
}

LinearForm v_form(const UVSpec& spec) {
  LinearForm form(spec.n_modes());
  for (int j = 1; j <= spec.n_modes(); ++j) {
    form.set_coeff(ModeLabel::target(j), Axis::Q, spec.b[j - 1]);
  }
  return form;
}

CertResult certify(const UVSpec& spec, const GaussianState& state) {
  if (state.n_modes() != spec.n_modes()) {
    throw std::invalid_argument("certify: state does not cover the witness modes");
  }
  CertResult result;
  result.var_u = quad_variance(state, u_form(spec));
  result.var_v = quad_variance(state, v_form(spec));
  const MinSB minimum = min_s_b(spec);
  result.min_s_b = minimum.value;
  result.argmin = minimum.argmin;
  if (!(result.min_s_b > 0.0) || !std::isfinite(result.min_s_b)) {
    throw std::domain_error("certify: degenerate witness, min S_B is zero");
  }
  if (spec.n_modes() <= kMaxRecordedBipartitionModes) {
    for (const Bipartition& bipartition : Bipartition::enumerate(spec.n_modes())) {
      result.s_b_all.emplace_back(bipartition, s_b(spec, bipartition));
    }
  }
  result.ent = (result.var_u + result.var_v) / (2.0 * result.min_s_b);
  result.certified = result.ent < 1.0;
  return result;
}

}  // namespace cvqnd
