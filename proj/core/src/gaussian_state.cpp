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

#include "cvqnd/gaussian_state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvqnd {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kSingularMarginalTol = 1e-12;

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() < 2 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("GaussianState: mean length must be 2M");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw std::invalid_argument("GaussianState: covariance shape mismatch");
  }
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw std::invalid_argument("GaussianState: covariance not symmetric");
  }
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  consumed_.assign(static_cast<size_t>(mean_.size() / 2), false);
}

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) {
    throw std::invalid_argument("vacuum: need at least one mode");
  }
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                       Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState squeezed(double s, Axis axis) {
  if (!std::isfinite(s)) {
    throw std::invalid_argument("squeezed: parameter must be finite");
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
  const int k = static_cast<int>(axis);
  cov(k, k) = std::exp(-2.0 * s);
  cov(1 - k, 1 - k) = std::exp(2.0 * s);
  return GaussianState(Eigen::VectorXd::Zero(2), cov);
}

GaussianState two_mode_squeezed(double s) {
  if (s < 0.0) {
    throw std::invalid_argument("two_mode_squeezed: parameter must be >= 0");
  }
  const double c = std::cosh(2.0 * s);
  const double sh = std::sinh(2.0 * s);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = c;
  cov(0, 2) = cov(2, 0) = sh;
  cov(1, 3) = cov(3, 1) = -sh;
  return GaussianState(Eigen::VectorXd::Zero(4), cov);
}

GaussianState ghz_state(int n_modes, double s) {
  if (n_modes < 2) {
    throw std::invalid_argument("ghz_state: need at least two modes");
  }
  const double minus = std::exp(-2.0 * s);
  const double plus = std::exp(2.0 * s);
  const double inv_n = 1.0 / n_modes;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    for (int j = 0; j < n_modes; ++j) {
      const double delta = (i == j) ? 1.0 : 0.0;
      cov(2 * i, 2 * j) = inv_n * minus + (delta - inv_n) * plus;
      cov(2 * i + 1, 2 * j + 1) = inv_n * plus + (delta - inv_n) * minus;
    }
  }
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes), cov);
}

GaussianState epr_type_state(int n_modes, double s) {
  if (n_modes < 3) {
    throw std::invalid_argument("epr_type_state: need at least three modes");
  }
  const double c = std::cosh(2.0 * s);
  const double sh = std::sinh(2.0 * s);
  const int last = n_modes - 1;
  const double split = 1.0 / std::sqrt(static_cast<double>(n_modes - 1));
  const double shared = (c - 1.0) / (n_modes - 1);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  cov(2 * last, 2 * last) = c;
  cov(2 * last + 1, 2 * last + 1) = c;
  for (int i = 0; i < last; ++i) {
    cov(2 * i, 2 * last) = cov(2 * last, 2 * i) = -split * sh;
    cov(2 * i + 1, 2 * last + 1) = cov(2 * last + 1, 2 * i + 1) = split * sh;
    for (int j = 0; j < last; ++j) {
      const double delta = (i == j) ? 1.0 : 0.0;
      cov(2 * i, 2 * j) = delta + shared;
      cov(2 * i + 1, 2 * j + 1) = delta + shared;
    }
  }
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes), cov);
}

GaussianState tensor(const std::vector<GaussianState>& states) {
  if (states.empty()) {
    throw std::invalid_argument("tensor: empty state list");
  }
  int total = 0;
  for (const auto& state : states) total += state.n_modes();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2 * total);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * total, 2 * total);
  std::vector<bool> consumed;
  consumed.reserve(static_cast<size_t>(total));
  int offset = 0;
  for (const auto& state : states) {
    const int size = 2 * state.n_modes();
    mean.segment(offset, size) = state.mean();
    cov.block(offset, offset, size, size) = state.cov();
    consumed.insert(consumed.end(), state.consumed_flags().begin(),
                    state.consumed_flags().end());
    offset += size;
  }
  GaussianState out(std::move(mean), std::move(cov));
  out.consumed_ = std::move(consumed);
  return out;
}

GaussianState apply_symplectic(const GaussianState& state,
                               const Eigen::MatrixXd& symplectic,
                               const Eigen::VectorXd& displacement) {
  const auto size = state.mean().size();
  if (symplectic.rows() != size || symplectic.cols() != size ||
      displacement.size() != size) {
    throw std::invalid_argument("apply_symplectic: shape mismatch");
  }
  if (!is_symplectic_matrix(symplectic)) {
    throw std::invalid_argument("apply_symplectic: matrix is not symplectic");
  }
  GaussianState out = state;
  out.mean_ = symplectic * state.mean() + displacement;
  out.cov_ = symplectic * state.cov() * symplectic.transpose();
  return out;
}

std::pair<HomodyneRecord, GaussianState> homodyne_measure(
    const GaussianState& state, int mode, Axis axis, std::mt19937_64& rng) {
  if (mode < 0 || mode >= state.n_modes()) {
    throw std::invalid_argument("homodyne_measure: mode out of range");
  }
  if (state.consumed(mode)) {
    throw std::logic_error("homodyne_measure: mode already consumed");
  }
  const int k = 2 * mode + static_cast<int>(axis);
  const double marginal = state.cov()(k, k);

  std::normal_distribution<double> unit_normal(0.0, 1.0);
  const double outcome =
      state.mean()[k] + std::sqrt(std::max(marginal, 0.0)) * unit_normal(rng);

  GaussianState out = state;
  if (marginal > kSingularMarginalTol) {
    const Eigen::VectorXd column = state.cov().col(k);
    out.cov_ -= (column * column.transpose()) / marginal;
    out.mean_ += column * ((outcome - state.mean()[k]) / marginal);
  }
  // Deterministic marginal (or pseudo-inverse branch): conditioning changes
  // nothing beyond recording the outcome.
  const int conj = 2 * mode + static_cast<int>(conjugate(axis));
  out.cov_.row(conj).setZero();
  out.cov_.col(conj).setZero();
  out.cov_(conj, conj) = kConsumedVarianceCap;
  out.consumed_[static_cast<size_t>(mode)] = true;
  return {HomodyneRecord{mode, axis, outcome}, std::move(out)};
}

GaussianState displace(const GaussianState& state, int mode, Axis axis,
                       double amount) {
  if (mode < 0 || mode >= state.n_modes()) {
    throw std::invalid_argument("displace: mode out of range");
  }
  GaussianState out = state;
  out.mean_[2 * mode + static_cast<int>(axis)] += amount;
  return out;
}

double quad_variance(const GaussianState& state, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != state.mean().size()) {
    throw std::invalid_argument("quad_variance: coefficient length mismatch");
  }
  for (int mode = 0; mode < state.n_modes(); ++mode) {
    if (state.consumed(mode) &&
        (coeffs[2 * mode] != 0.0 || coeffs[2 * mode + 1] != 0.0)) {
      throw std::logic_error("quad_variance: form touches a consumed mode");
    }
  }
  return coeffs.dot(state.cov() * coeffs);
}

double quad_variance(const GaussianState& state, const LinearForm& form) {
  const int n_targets = form.n_targets();
  if (state.n_modes() == n_targets + 2) {
    return quad_variance(state, form.coefficients());
  }
  if (state.n_modes() == n_targets) {
    const Eigen::VectorXd& full = form.coefficients();
    if (full.tail(4).cwiseAbs().maxCoeff() != 0.0) {
      throw std::invalid_argument(
          "quad_variance: form has ancilla terms but state has none");
    }
    return quad_variance(state, Eigen::VectorXd(full.head(2 * n_targets)));
  }
  throw std::invalid_argument("quad_variance: form modes not a subset of state");
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd form = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    form(2 * i, 2 * i + 1) = 1.0;
    form(2 * i + 1, 2 * i) = -1.0;
  }
  return form;
}

bool is_symplectic_matrix(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0) return false;
  const Eigen::MatrixXd form = symplectic_form(static_cast<int>(matrix.rows()) / 2);
  return (matrix * form * matrix.transpose() - form).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd symplectic_eigenvalues(const GaussianState& state) {
  std::vector<int> live;
  for (int mode = 0; mode < state.n_modes(); ++mode) {
    if (!state.consumed(mode)) live.push_back(mode);
  }
  const int m = static_cast<int>(live.size());
  if (m == 0) return Eigen::VectorXd();
  Eigen::MatrixXd cov(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      cov.block<2, 2>(2 * a, 2 * b) =
          state.cov().block<2, 2>(2 * live[a], 2 * live[b]);
    }
  }
  const Eigen::MatrixXd product = symplectic_form(m) * cov;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(product, false);
  std::vector<double> values;
  for (int i = 0; i < product.rows(); ++i) {
    const double nu = std::abs(solver.eigenvalues()[i].imag());
    values.push_back(nu);
  }
  std::sort(values.begin(), values.end());
  // Eigenvalues come in +-i nu pairs; keep one per pair.
  Eigen::VectorXd out(m);
  for (int i = 0; i < m; ++i) out[i] = (values[2 * i] + values[2 * i + 1]) / 2.0;
  return out;
}

bool is_physical(const GaussianState& state, double tol) {
  const Eigen::VectorXd nu = symplectic_eigenvalues(state);
  return nu.size() == 0 || nu.minCoeff() >= 1.0 - tol;
}

bool is_pure(const GaussianState& state, double tol) {
  const Eigen::VectorXd nu = symplectic_eigenvalues(state);
  return nu.size() == 0 || (nu.array() - 1.0).abs().maxCoeff() <= tol;
}

Eigen::MatrixXd beamsplitter_symplectic(int n_modes, int x, int y, double t,
                                        double r) {
  if (x == y || x < 0 || y < 0 || x >= n_modes || y >= n_modes) {
    throw std::invalid_argument("beamsplitter_symplectic: bad mode pair");
  }
  if (std::abs(t * t + r * r - 1.0) > 1e-12) {
    throw std::invalid_argument("beamsplitter_symplectic: t^2 + r^2 != 1");
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < 2; ++k) {
    s(2 * x + k, 2 * x + k) = t;
    s(2 * x + k, 2 * y + k) = r;
    s(2 * y + k, 2 * y + k) = t;
    s(2 * y + k, 2 * x + k) = -r;
  }
  return s;
}

}  // namespace cvqnd
