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

#include <random>
#include <utility>
#include <vector>

#include "cvqnd/linear_form.hpp"
#include "cvqnd/modes.hpp"

namespace cvqnd {

/// Variance written onto the conjugate quadrature of a homodyned mode.
/// Consumed modes are excluded from physicality and variance queries, so the
/// cap is bookkeeping only.
inline constexpr double kConsumedVarianceCap = 1e12;

/// Gaussian state of M modes: mean vector and symmetric covariance matrix in
/// quadrature-variance units (vacuum variance 1), with interleaved ordering
/// (q_1, p_1, q_2, p_2, ...). Value-semantic; operations return new states.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  bool consumed(int mode) const { return consumed_[static_cast<size_t>(mode)]; }
  const std::vector<bool>& consumed_flags() const { return consumed_; }

  double mean_of(int mode, Axis axis) const {
    return mean_[2 * mode + static_cast<int>(axis)];
  }
  double variance_of(int mode, Axis axis) const {
    const int k = 2 * mode + static_cast<int>(axis);
    return cov_(k, k);
  }

 private:
  friend GaussianState tensor(const std::vector<GaussianState>& states);
  friend GaussianState apply_symplectic(const GaussianState& state,
                                        const Eigen::MatrixXd& symplectic,
                                        const Eigen::VectorXd& displacement);
  friend GaussianState displace(const GaussianState& state, int mode, Axis axis,
                                double amount);
  friend std::pair<struct HomodyneRecord, GaussianState> homodyne_measure(
      const GaussianState& state, int mode, Axis axis, std::mt19937_64& rng);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::vector<bool> consumed_;
};

struct HomodyneRecord {
  int mode = 0;
  Axis axis = Axis::Q;
  double outcome = 0.0;
};

GaussianState vacuum(int n_modes);

/// Single mode squeezed by s along the given axis: variance e^{-2s} there,
/// e^{+2s} on the conjugate.
GaussianState squeezed(double s, Axis axis);

/// Two-mode squeezed vacuum: Var(q_i) = Var(p_i) = cosh 2s,
/// <q_1 q_2> = sinh 2s, <p_1 p_2> = -sinh 2s.
GaussianState two_mode_squeezed(double s);

/// N-mode GHZ-class state with the total position squeezed and momentum
/// differences squeezed: <q_i q_j> = e^{-2s}/N + (delta_ij - 1/N) e^{+2s},
/// <p_i p_j> = e^{+2s}/N + (delta_ij - 1/N) e^{-2s}. Equivalent to one
/// q-squeezed plus N-1 p-squeezed modes behind a balanced N-port splitter.
GaussianState ghz_state(int n_modes, double s);

/// Asymmetric N-mode state: mode N keeps one arm of a two-mode squeezed
/// vacuum while the other arm is spread evenly over modes 1..N-1 (balanced
/// splitter, vacuum at the idle ports). Position cross-correlations between
/// mode N and the split modes are negative, momentum ones positive.
GaussianState epr_type_state(int n_modes, double s);

GaussianState tensor(const std::vector<GaussianState>& states);

/// mean <- S mean + d, cov <- S cov S^T. S must be symplectic within 1e-10.
GaussianState apply_symplectic(const GaussianState& state,
                               const Eigen::MatrixXd& symplectic,
                               const Eigen::VectorXd& displacement);

/// Samples the marginal of the chosen quadrature and returns the conditioned
/// state. The conditioned covariance does not depend on the outcome; the
/// measured mode is flagged consumed and its conjugate variance is capped.
std::pair<HomodyneRecord, GaussianState> homodyne_measure(
    const GaussianState& state, int mode, Axis axis, std::mt19937_64& rng);

GaussianState displace(const GaussianState& state, int mode, Axis axis,
                       double amount);

/// c^T cov c for the coefficient vector of the form (constant ignored).
/// The form's basis must match the state: either n_targets == n_modes with
/// zero ancilla coefficients, or n_targets + 2 == n_modes with the ancillas
/// mapped to the last two modes.
double quad_variance(const GaussianState& state, const LinearForm& form);
double quad_variance(const GaussianState& state, const Eigen::VectorXd& coeffs);

/// Symplectic spectrum of the non-consumed block, ascending. Physical states
/// have every value >= 1 in this normalization.
Eigen::VectorXd symplectic_eigenvalues(const GaussianState& state);
bool is_physical(const GaussianState& state, double tol = 1e-9);
bool is_pure(const GaussianState& state, double tol = 1e-9);

/// Direct sum symplectic form J (blocks [[0, 1], [-1, 0]]) for M modes.
Eigen::MatrixXd symplectic_form(int n_modes);
bool is_symplectic_matrix(const Eigen::MatrixXd& matrix, double tol = 1e-10);

/// Two-mode beam-splitter symplectic acting on modes x and y of an M-mode
/// state, matching the register convention: X_x <- t X_x + r X_y,
/// X_y <- t X_y - r X_x.
Eigen::MatrixXd beamsplitter_symplectic(int n_modes, int x, int y, double t,
                                        double r);

}  // namespace cvqnd
