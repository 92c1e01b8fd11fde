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

#include "cvqnd/linear_form.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqnd {

LinearForm::LinearForm(int n_targets) : n_targets_(n_targets) {
  if (n_targets < 1 || n_targets > kMaxTargetModes) {
    throw std::invalid_argument("LinearForm: target count out of range");
  }
  coeffs_ = Eigen::VectorXd::Zero(2 * (n_targets + 2));
}

LinearForm LinearForm::basis(int n_targets, ModeLabel mode, Axis axis) {
  LinearForm form(n_targets);
  form.set_coeff(mode, axis, 1.0);
  return form;
}

LinearForm LinearForm::from_coefficients(int n_targets, Eigen::VectorXd coeffs,
                                         double constant) {
  LinearForm form(n_targets);
  if (coeffs.size() != form.coeffs_.size()) {
    throw std::invalid_argument("LinearForm: coefficient vector size mismatch");
  }
  form.coeffs_ = std::move(coeffs);
  form.constant_ = constant;
  return form;
}

int LinearForm::slot(ModeLabel mode) const {
  switch (mode.kind) {
    case ModeLabel::Kind::AncillaA:
      return n_targets_;
    case ModeLabel::Kind::AncillaB:
      return n_targets_ + 1;
    default:
      if (mode.index < 1 || mode.index > n_targets_) {
        throw std::invalid_argument("LinearForm: target index out of range");
      }
      return mode.index - 1;
  }
}

double LinearForm::coeff(ModeLabel mode, Axis axis) const {
  return coeffs_[2 * slot(mode) + static_cast<int>(axis)];
}

LinearForm& LinearForm::set_coeff(ModeLabel mode, Axis axis, double value) {
  coeffs_[2 * slot(mode) + static_cast<int>(axis)] = value;
  return *this;
}

LinearForm& LinearForm::add_coeff(ModeLabel mode, Axis axis, double value) {
  coeffs_[2 * slot(mode) + static_cast<int>(axis)] += value;
  return *this;
}

LinearForm& LinearForm::set_constant(double value) {
  constant_ = value;
  return *this;
}

LinearForm LinearForm::scaled(double factor) const {
  LinearForm out(*this);
  out.coeffs_ *= factor;
  out.constant_ *= factor;
  return out;
}

LinearForm LinearForm::target_part() const {
  LinearForm out(*this);
  out.coeffs_.tail(4).setZero();
  out.constant_ = 0.0;
  return out;
}

LinearForm LinearForm::ancilla_part() const {
  LinearForm out(*this);
  out.coeffs_.head(2 * n_targets_).setZero();
  out.constant_ = 0.0;
  return out;
}

LinearForm lf_combine(const std::vector<std::pair<double, LinearForm>>& terms) {
  if (terms.empty()) {
    throw std::invalid_argument("lf_combine: empty term list");
  }
  const int n_targets = terms.front().second.n_targets();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(2 * (n_targets + 2));
  double constant = 0.0;
  for (const auto& [weight, form] : terms) {
    if (form.n_targets() != n_targets) {
      throw std::invalid_argument("lf_combine: mismatched mode sets");
    }
    acc += weight * form.coefficients();
    constant += weight * form.constant();
  }
  return LinearForm::from_coefficients(n_targets, std::move(acc), constant);
}

double bracket(const LinearForm& u, const LinearForm& v) {
  if (!u.same_basis(v)) {
    throw std::invalid_argument("bracket: mismatched mode sets");
  }
  double sum = 0.0;
  for (int slot = 0; slot < u.n_slots(); ++slot) {
    sum += u.coeff_at(slot, Axis::Q) * v.coeff_at(slot, Axis::P) -
           u.coeff_at(slot, Axis::P) * v.coeff_at(slot, Axis::Q);
  }
  return kQuadCommutator * sum;
}

double max_coeff_distance(const LinearForm& u, const LinearForm& v) {
  if (!u.same_basis(v)) {
    throw std::invalid_argument("max_coeff_distance: mismatched mode sets");
  }
  double d = (u.coefficients() - v.coefficients()).cwiseAbs().maxCoeff();
  return std::max(d, std::abs(u.constant() - v.constant()));
}

}  // namespace cvqnd
