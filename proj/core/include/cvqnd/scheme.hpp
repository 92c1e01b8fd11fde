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
#include <optional>
#include <vector>

#include "cvqnd/gaussian_state.hpp"
#include "cvqnd/mode_register.hpp"

namespace cvqnd {

// The interaction couples N target modes to two ancillas by a beam-splitter
// cascade: A sweeps targets 1..m then m+1..N, B sweeps N..m+1 then m..1, so
// every target meets both ancillas once from each side. Homodyne readouts of
// p_A and q_B then feed displacement loops back onto the targets. All
// splitters share transmission t_o except one distinguished splitter on the
// N-th line, whose transmission t_d is fixed by requiring the two readouts to
// commute.

/// Which splitter pattern carries the distinguished coefficient:
/// UniformLast puts t_d on both (A,N) and (B,N); AltBn only on (A,N).
enum class Variant { UniformLast, AltBn };

struct GainOverrides {
  std::vector<double> q_gains;  // applied to the q_B readout, one per target
  std::vector<double> p_gains;  // applied to the p_A readout, one per target
};

struct SchemeConfig {
  int n = 3;
  int m = 2;
  double t_o = 0.9;
  Variant variant = Variant::UniformLast;
  double s_a = 0.0;  // ancilla A squeezing (q axis)
  double s_b = 0.0;  // ancilla B squeezing (p axis)
  std::optional<GaussianState> input_state;  // over the n target modes
  std::optional<GainOverrides> gain_overrides;
  double k_a = 1.0;
  double k_b = 1.0;
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;  // throws std::invalid_argument on violations
};

/// The closed-form description of a compatible configuration: distinguished
/// coefficients, the per-mode readout weights f and g (which double as the
/// feedforward gains), and the effective coupling gains of the realized map.
struct CoefficientTable {
  double t_d = 0.0;
  double r_d = 0.0;
  std::vector<double> f;          // length n
  std::vector<double> g;          // length n
  std::vector<double> qnd_gains;  // G_j = -2 r_d t_d g_j, length n - 1

  double sum_fg() const;
};

struct BeamSplitterStep {
  ModeLabel target;
  ModeLabel ancilla;
  double t = 1.0;
  double r = 0.0;
};

/// The cascade in canonical order (A down 1..m, B down N..m+1, B down m..1,
/// A down m+1..N). Any reordering that keeps each ancilla's own sequence and
/// each target's two encounters in order produces the same register.
std::vector<BeamSplitterStep> beamsplitter_sequence(int n, int m, double t_o,
                                                    double t_d, Variant variant);

ModeRegister build_register(int n, int m, double t_o, double t_d,
                            Variant variant);

/// Split commutator of the two readouts as a function of t_d: the bracket of
/// their target-restricted parts. The full bracket vanishes identically (the
/// cascade is passive, so distinct output modes always commute); compatible
/// readouts additionally need the target and ancilla parts to commute
/// independently, which pins t_d. The ancilla-part bracket is the negative of
/// this value.
double readout_commutator(int n, int m, double t_o, double t_d, Variant variant);

/// Root of the split commutator in (0, 1), found by bisection on the symbolic
/// bracket and cross-checked against the closed form where one exists (the
/// closed value is returned then, carrying full double accuracy). Throws
/// std::runtime_error if no root is bracketed, std::logic_error if the root
/// and the closed form disagree.
double solve_compatibility(int n, int m, double t_o, Variant variant);

/// The raw bisection root, without the closed-form substitution.
double solve_compatibility_numeric(int n, int m, double t_o, Variant variant);

/// Closed-form t_d: available for every UniformLast configuration and for the
/// tripartite AltBn case.
std::optional<double> compatibility_closed_form(int n, int m, double t_o,
                                                Variant variant);

/// Coefficients for a compatible configuration. UniformLast tables use the
/// closed forms; AltBn tables are read off the symbolically built readout
/// forms, normalized by t_d t_o^{n-1}.
CoefficientTable coefficient_table(const SchemeConfig& config);

struct FeedforwardGains {
  std::vector<double> q;  // gain on the q_B readout per target
  std::vector<double> p;  // gain on the p_A readout per target
};

/// Gains that cancel the anti-squeezed ancilla quadratures (q_B in every
/// target q, p_A in every target p). For UniformLast these coincide with the
/// table's f and g.
FeedforwardGains feedforward_gains(const ModeRegister& reg);

/// Same rule evaluated at the compatibility point with extended-precision
/// internals; tight enough to compare against the table coefficients.
FeedforwardGains feedforward_gains(int n, int m, double t_o, Variant variant);

struct SchemeRun {
  CoefficientTable table;
  LinearForm readout_p_a;
  LinearForm readout_q_b;
  std::vector<LinearForm> out_q;  // per target, over the input basis
  std::vector<LinearForm> out_p;
  std::optional<GaussianState> output_state;  // target modes only
  double var_p_a = 0.0;  // k_a-scaled readout variance
  double var_q_b = 0.0;  // k_b-scaled readout variance
};

/// Symbolic pipeline: register, readout extraction, feedforward. For
/// UniformLast with automatic gains the result is checked against the closed
/// output forms; a mismatch throws std::logic_error.
SchemeRun run_heisenberg(const SchemeConfig& config);

/// run_heisenberg plus statistics: evaluates the output forms and readouts
/// against tensor(input_state, squeezed ancillas).
SchemeRun run_analytic(const SchemeConfig& config);

/// Joint state the pipeline acts on: input targets, then ancilla A squeezed
/// along q by s_a, then ancilla B squeezed along p by s_b.
GaussianState joint_input_state(const SchemeConfig& config);

/// Symplectic matrix of the ideal coupling for a gain matrix of shape
/// (signal count) x (probe count): signal positions and probe momenta pass
/// through, probe positions gain copies of signal positions, signal momenta
/// absorb probe momenta.
Eigen::MatrixXd ideal_qnd_map(const Eigen::MatrixXd& gains);

struct MonteCarloResult {
  long samples = 0;
  Eigen::VectorXd mean;               // empirical target mean, length 2n
  Eigen::MatrixXd cov;                // feedforward scatter + conditional part
  Eigen::MatrixXd mean_sample_cov;    // scatter of the conditional means alone
  Eigen::MatrixXd conditional_cov;    // outcome-independent part
};

/// Trajectory sampling of the measurement-and-displacement loop.
MonteCarloResult run_monte_carlo(const SchemeConfig& config, long n_samples,
                                 std::uint64_t seed);

}  // namespace cvqnd
