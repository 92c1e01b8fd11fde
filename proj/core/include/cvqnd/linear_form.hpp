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

#include <utility>
#include <vector>

#include "cvqnd/modes.hpp"

namespace cvqnd {

/// A quadrature operator in the Heisenberg picture, stored as real
/// coefficients over the canonical input quadratures of a fixed basis of
/// n targets plus the two ancillas, with an additive c-number offset.
///
/// Slots are ordered targets 1..n, then ancilla A, then ancilla B; each slot
/// holds an interleaved (q, p) coefficient pair. Values are immutable in
/// spirit: every operation below returns a new form.
class LinearForm {
 public:
  LinearForm() : LinearForm(1) {}
  explicit LinearForm(int n_targets);

  static LinearForm basis(int n_targets, ModeLabel mode, Axis axis);
  static LinearForm from_coefficients(int n_targets, Eigen::VectorXd coeffs,
                                      double constant = 0.0);

  int n_targets() const { return n_targets_; }
  int n_slots() const { return n_targets_ + 2; }

  int slot(ModeLabel mode) const;

  double coeff(ModeLabel mode, Axis axis) const;
  double coeff_at(int slot, Axis axis) const {
    return coeffs_[2 * slot + static_cast<int>(axis)];
  }
  double constant() const { return constant_; }

  LinearForm& set_coeff(ModeLabel mode, Axis axis, double value);
  LinearForm& add_coeff(ModeLabel mode, Axis axis, double value);
  LinearForm& set_constant(double value);

  /// Interleaved coefficient vector of length 2 * (n_targets + 2).
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  LinearForm scaled(double factor) const;
  LinearForm target_part() const;   // ancilla coefficients dropped
  LinearForm ancilla_part() const;  // target coefficients dropped

  bool same_basis(const LinearForm& other) const {
    return n_targets_ == other.n_targets_;
  }

 private:
  int n_targets_;
  Eigen::VectorXd coeffs_;
  double constant_ = 0.0;
};

/// Coefficient-wise weighted sum. All forms must share one basis.
LinearForm lf_combine(const std::vector<std::pair<double, LinearForm>>& terms);

/// The c-number coefficient of [u, v] / i: bilinear, antisymmetric,
/// kQuadCommutator on a canonical (q, p) pair of one mode.
double bracket(const LinearForm& u, const LinearForm& v);

/// Largest absolute coefficient or constant difference between two forms.
double max_coeff_distance(const LinearForm& u, const LinearForm& v);

}  // namespace cvqnd
