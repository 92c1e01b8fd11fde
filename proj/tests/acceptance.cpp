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

// End-to-end acceptance suite. Each criterion prints one pass/fail line; the
// process exits nonzero if any criterion fails. Tolerances on coefficient
// comparisons are relative to max(1, |value|), since tabulated coefficients
// reach ~1e9 at the deep-cascade corners of the grid.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cvqnd/entanglement.hpp"
#include "cvqnd/scan.hpp"

using namespace cvqnd;

namespace {

int g_failures = 0;
std::vector<GaussianState> g_tracked_states;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

const GaussianState& track(const GaussianState& state) {
  g_tracked_states.push_back(state);
  return g_tracked_states.back();
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double rel_distance(const LinearForm& u, const LinearForm& v) {
  double worst = 0.0;
  for (int i = 0; i < u.coefficients().size(); ++i) {
    worst = std::max(worst, rel_gap(u.coefficients()[i], v.coefficients()[i]));
  }
  return worst;
}

std::vector<double> open_grid(int count, double lo, double hi) {
  // Points strictly inside (lo, hi).
  std::vector<double> values(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    values[static_cast<size_t>(i)] = lo + (hi - lo) * (i + 1) / (count + 1);
  }
  return values;
}

SchemeConfig config_for(int n, int m, double t_o,
                        Variant variant = Variant::UniformLast) {
  SchemeConfig config;
  config.n = n;
  config.m = m;
  config.t_o = t_o;
  config.variant = variant;
  return config;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void criterion_1_compatibility() {
  const auto start = std::chrono::steady_clock::now();
  double worst_bracket = 0.0;
  double worst_root = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (int m = 1; m <= n - 1; ++m) {
      for (double t_o : open_grid(20, 0.05, 0.999)) {
        const double closed = std::pow(t_o, m) /
                              std::sqrt(2.0 - std::pow(t_o, 2.0 * (n - m - 1)));
        worst_bracket = std::max(
            worst_bracket,
            std::abs(readout_commutator(n, m, t_o, closed, Variant::UniformLast)));
        worst_root = std::max(
            worst_root,
            std::abs(solve_compatibility_numeric(n, m, t_o, Variant::UniformLast) -
                     closed));
      }
    }
  }
  const double seconds = elapsed_seconds(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "max |split commutator| %.2e < 1e-12, max |root - closed| "
                "%.2e < 1e-10, %.1f s < 5 s",
                worst_bracket, worst_root, seconds);
  report(1, "compatibility identity over n=2..8, all m, 20 t_o values",
         worst_bracket < 1e-12 && worst_root < 1e-10 && seconds < 5.0, detail);
}

void criterion_2_closed_t_d() {
  double worst = 0.0;
  for (double t_o : open_grid(20, 0.05, 0.999)) {
    const double t2 = t_o * t_o;
    worst = std::max(
        worst, std::abs(solve_compatibility(3, 2, t_o, Variant::UniformLast) - t2));
    worst = std::max(
        worst, std::abs(solve_compatibility(4, 2, t_o, Variant::UniformLast) -
                        t2 / std::sqrt(2.0 - t2)));
    worst = std::max(
        worst, std::abs(solve_compatibility(4, 3, t_o, Variant::UniformLast) -
                        t2 * t_o));
    worst = std::max(
        worst, std::abs(solve_compatibility(3, 2, t_o, Variant::AltBn) -
                        t_o / std::sqrt(t2 + (1.0 + t2) * (1.0 - t2 * t2))));
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "max deviation %.2e < 1e-12", worst);
  report(2, "closed distinguished-transmission expressions", worst < 1e-12,
         detail);
}

void criterion_3_coefficients_and_forms() {
  double worst_sum = 0.0;
  double worst_form = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (int m = 1; m <= n - 1; ++m) {
      for (double t_o : open_grid(20, 0.05, 0.999)) {
        const SchemeConfig config = config_for(n, m, t_o);
        const SchemeRun run = run_heisenberg(config);
        const CoefficientTable& table = run.table;
        double sum = 0.0, scale = 0.0;
        for (int j = 0; j < n; ++j) {
          sum += table.f[j] * table.g[j];
          scale += std::abs(table.f[j] * table.g[j]);
        }
        worst_sum = std::max(worst_sum, std::abs(sum) / std::max(1.0, scale));

        const double back = table.r_d * table.r_d - table.t_d * table.t_d;
        for (int j = 1; j <= n; ++j) {
          LinearForm want_q(n), want_p(n);
          if (j < n) {
            want_q.set_coeff(ModeLabel::target(j), Axis::Q, 1.0);
            want_q.set_coeff(ModeLabel::ancilla_a(), Axis::Q, -table.f[j - 1]);
            want_p.set_coeff(ModeLabel::target(j), Axis::P, 1.0);
            want_p.set_coeff(ModeLabel::target(n), Axis::P,
                             2.0 * table.r_d * table.t_d * table.g[j - 1]);
            want_p.set_coeff(ModeLabel::ancilla_b(), Axis::P,
                             back * table.g[j - 1]);
          } else {
            want_q.set_coeff(ModeLabel::target(n), Axis::Q, 1.0);
            for (int i = 1; i <= n - 1; ++i) {
              want_q.set_coeff(ModeLabel::target(i), Axis::Q,
                               -2.0 * table.r_d * table.t_d * table.g[i - 1]);
            }
            want_q.set_coeff(ModeLabel::ancilla_a(), Axis::Q,
                             -back * table.f[n - 1]);
            want_p.set_coeff(ModeLabel::target(n), Axis::P, 1.0);
            want_p.set_coeff(ModeLabel::ancilla_b(), Axis::P, table.g[n - 1]);
          }
          worst_form =
              std::max(worst_form, rel_distance(run.out_q[j - 1], want_q));
          worst_form =
              std::max(worst_form, rel_distance(run.out_p[j - 1], want_p));
        }
      }
    }
  }

  // Tripartite rows, literally.
  double worst_tri = 0.0;
  for (double t_o : open_grid(20, 0.05, 0.999)) {
    const double r_o = std::sqrt(1.0 - t_o * t_o);
    const double t_d = t_o * t_o;
    const double r_d = std::sqrt(1.0 - t_d * t_d);
    const double back = r_d * r_d - t_d * t_d;
    const SchemeRun run = run_heisenberg(config_for(3, 2, t_o));
    LinearForm q1(3), p1(3), q2(3), p2(3), q3(3), p3(3);
    q1.set_coeff(ModeLabel::target(1), Axis::Q, 1.0);
    q1.set_coeff(ModeLabel::ancilla_a(), Axis::Q, r_o / t_o);
    p1.set_coeff(ModeLabel::target(1), Axis::P, 1.0);
    p1.set_coeff(ModeLabel::target(3), Axis::P, -2.0 * r_o * r_d * t_o);
    p1.set_coeff(ModeLabel::ancilla_b(), Axis::P, -(r_o * t_o / t_d) * back);
    q2.set_coeff(ModeLabel::target(2), Axis::Q, 1.0);
    q2.set_coeff(ModeLabel::ancilla_a(), Axis::Q, r_o / (t_o * t_o));
    p2.set_coeff(ModeLabel::target(2), Axis::P, 1.0);
    p2.set_coeff(ModeLabel::target(3), Axis::P, -2.0 * r_o * r_d);
    p2.set_coeff(ModeLabel::ancilla_b(), Axis::P, -(r_o / t_d) * back);
    q3.set_coeff(ModeLabel::target(3), Axis::Q, 1.0);
    q3.set_coeff(ModeLabel::target(1), Axis::Q, 2.0 * r_o * r_d * t_o);
    q3.set_coeff(ModeLabel::target(2), Axis::Q, 2.0 * r_o * r_d);
    q3.set_coeff(ModeLabel::ancilla_a(), Axis::Q,
                 (r_d / (t_o * t_o)) * (1.0 - 2.0 * std::pow(t_o, 4)));
    p3.set_coeff(ModeLabel::target(3), Axis::P, 1.0);
    p3.set_coeff(ModeLabel::ancilla_b(), Axis::P, r_d / t_d);
    worst_tri = std::max({worst_tri, rel_distance(run.out_q[0], q1),
                          rel_distance(run.out_p[0], p1),
                          rel_distance(run.out_q[1], q2),
                          rel_distance(run.out_p[1], p2),
                          rel_distance(run.out_q[2], q3),
                          rel_distance(run.out_p[2], p3)});
  }

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "gain constraint %.2e, output forms %.2e, tripartite rows "
                "%.2e, all < 1e-12",
                worst_sum, worst_form, worst_tri);
  report(3, "coefficient constraint and closed output forms",
         worst_sum < 1e-12 && worst_form < 1e-12 && worst_tri < 1e-12, detail);
}

void criterion_4_min_s_b() {
  double worst = 0.0;
  for (double t_o : open_grid(50, 0.05, 0.999)) {
    const double t2 = t_o * t_o;
    {
      const SchemeConfig config = config_for(3, 2, t_o);
      const CoefficientTable table = coefficient_table(config);
      worst = std::max(worst, rel_gap(min_s_b(uv_input(config, table)).value,
                                      2.0 * (1.0 - t2) / t2));
      worst = std::max(
          worst, rel_gap(min_s_b(uv_output(config, table)).value,
                         std::abs(1.0 - 2.0 * t2 * t2) * 2.0 * (1.0 - t2) / t2));
    }
    {
      const SchemeConfig config = config_for(4, 2, t_o);
      worst = std::max(
          worst,
          rel_gap(min_s_b(uv_input(config, coefficient_table(config))).value,
                  2.0 * (1.0 - t2) * std::sqrt(2.0 - t2) / (t2 * t_o)));
    }
    {
      const SchemeConfig config = config_for(4, 3, t_o);
      worst = std::max(
          worst,
          rel_gap(min_s_b(uv_input(config, coefficient_table(config))).value,
                  2.0 * (1.0 - t2) / t2));
    }
    {
      const SchemeConfig config = config_for(3, 2, t_o, Variant::AltBn);
      worst = std::max(
          worst,
          rel_gap(min_s_b(uv_input(config, coefficient_table(config))).value,
                  2.0 * (1.0 - t2) * std::sqrt(t2 + (1.0 + t2) * (1.0 - t2 * t2)) /
                      t_o));
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "max relative deviation %.2e < 1e-10",
                worst);
  report(4, "exhaustive witness minimum equals the closed expressions",
         worst < 1e-10, detail);
}

void criterion_5_ideal_limit() {
  const auto start = std::chrono::steady_clock::now();
  const double s_anc = db_to_squeezing(60.0);
  double worst = 0.0;
  for (int n : {3, 4}) {
    for (const bool collective : {false, true}) {
      SchemeConfig config = config_for(n, n - 1, 0.9);
      config.s_a = s_anc;
      config.s_b = s_anc;
      config.input_state =
          collective ? track(ghz_state(n, 1.0)) : track(vacuum(n));
      const SchemeRun run = run_analytic(config);
      track(*run.output_state);
      Eigen::MatrixXd gains(n - 1, 1);
      for (int j = 0; j < n - 1; ++j) gains(j, 0) = run.table.qnd_gains[j];
      const GaussianState ideal =
          apply_symplectic(*config.input_state, ideal_qnd_map(gains),
                           Eigen::VectorXd::Zero(2 * n));
      track(ideal);
      const double scale = std::max(1.0, ideal.cov().cwiseAbs().maxCoeff());
      worst = std::max(
          worst,
          (run.output_state->cov() - ideal.cov()).cwiseAbs().maxCoeff() / scale);
    }
  }
  const double seconds = elapsed_seconds(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "max covariance gap %.2e < 1e-3 (relative to scale), %.2f s < 1 s",
                worst, seconds);
  report(5, "60 dB ancillas reproduce the ideal coupling map",
         worst < 1e-3 && seconds < 1.0, detail);
}

void criterion_6_monte_carlo() {
  const auto start = std::chrono::steady_clock::now();
  SchemeConfig config = config_for(3, 2, 0.9);
  config.input_state = track(ghz_state(3, 1.0));
  config.s_a = 1.0;
  config.s_b = 1.0;
  const SchemeRun run = run_analytic(config);
  track(*run.output_state);
  const MonteCarloResult mc = run_monte_carlo(config, 100000, 0xace5eed);
  const Eigen::MatrixXd& analytic = run.output_state->cov();
  const Eigen::MatrixXd scatter = analytic - mc.conditional_cov;
  double worst_ratio = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double se = std::sqrt(
          std::max(scatter(i, i) * scatter(j, j) + scatter(i, j) * scatter(i, j),
                   0.0) /
          static_cast<double>(mc.samples));
      worst_ratio = std::max(
          worst_ratio, std::abs(mc.cov(i, j) - analytic(i, j)) / (5.0 * se + 1e-12));
    }
  }
  const double seconds = elapsed_seconds(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "worst entry at %.2f of the 5-sigma budget, %.1f s < 30 s",
                worst_ratio, seconds);
  report(6, "1e5 trajectories match the analytic output covariance",
         worst_ratio < 1.0 && seconds < 30.0, detail);
}

struct RegionSummary {
  int cells = 0;
  int t_columns = 0;
  double min_ent = 1e300;
  double lowest_certified_t_o = 1e300;
};

RegionSummary summarize(const std::vector<ScanRow>& rows, bool output_side,
                        int s_steps) {
  RegionSummary summary;
  int column_hit = 0;
  int index = 0;
  for (const ScanRow& row : rows) {
    const auto& ent = output_side ? row.ent_out : row.ent_in;
    const auto& certified = output_side ? row.certified_out : row.certified_in;
    if (ent) summary.min_ent = std::min(summary.min_ent, *ent);
    if (certified && *certified) {
      ++summary.cells;
      column_hit = 1;
      summary.lowest_certified_t_o =
          std::min(summary.lowest_certified_t_o, row.t_o);
    }
    if (++index % s_steps == 0) {
      summary.t_columns += column_hit;
      column_hit = 0;
    }
  }
  return summary;
}

void criterion_7_figure_regions() {
  const auto scan = [](int n, int m, Variant variant, StateKind state,
                       SideSelection side) {
    RunConfig config;
    config.n = n;
    config.m = m;
    config.variant = variant;
    config.state_kind = state;
    config.t_o = Range{0.50, 0.999, 50};
    config.s = Range{0.0, 2.5, 50};
    config.side = side;
    return run_scan(config, 8);
  };
  const int steps = 50;

  const RegionSummary epr_uniform = summarize(
      scan(3, 2, Variant::UniformLast, StateKind::EprType, SideSelection::Input),
      false, steps);
  const RegionSummary ghz_uniform = summarize(
      scan(3, 2, Variant::UniformLast, StateKind::Ghz, SideSelection::Input),
      false, steps);
  const RegionSummary ghz_alt = summarize(
      scan(3, 2, Variant::AltBn, StateKind::Ghz, SideSelection::Input), false,
      steps);
  const RegionSummary tetra_m2 = summarize(
      scan(4, 2, Variant::UniformLast, StateKind::EprType, SideSelection::Input),
      false, steps);
  const RegionSummary tetra_m3 = summarize(
      scan(4, 3, Variant::UniformLast, StateKind::EprType, SideSelection::Input),
      false, steps);
  const RegionSummary epr_output = summarize(
      scan(3, 2, Variant::UniformLast, StateKind::EprType, SideSelection::Output),
      true, steps);

  // (a) broad certification across the transmission range at moderate
  // squeezing for the asymmetric state.
  const bool pass_a = epr_uniform.t_columns >= 45 && epr_uniform.cells >= 1200;
  // (b) collective state under the common pattern: certification exists but
  // only in a band near 1, far narrower than (a).
  const bool pass_b = ghz_uniform.cells > 0 &&
                      ghz_uniform.lowest_certified_t_o >= 0.70 &&
                      2 * ghz_uniform.t_columns < epr_uniform.t_columns + 10 &&
                      ghz_uniform.cells * 2 < epr_uniform.cells;
  // (c) the alt-bn pattern widens the collective region and deepens the ratio.
  const bool pass_c = ghz_alt.cells > 2 * ghz_uniform.cells &&
                      ghz_alt.min_ent < 0.5 * ghz_uniform.min_ent;
  // (d) the asymmetric tetrapartite setup certifies strictly more cells with
  // the later crossover.
  const bool pass_d = tetra_m3.cells > tetra_m2.cells;
  // (e) output-side monitoring certifies a nonempty region.
  const bool pass_e = epr_output.cells >= 50;

  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "(a) %d cells/%d cols, (b) %d cells from t_o=%.3f min ent "
                "%.2f, (c) %d cells min ent %.3f, (d) %d > %d, (e) %d cells",
                epr_uniform.cells, epr_uniform.t_columns, ghz_uniform.cells,
                ghz_uniform.lowest_certified_t_o, ghz_uniform.min_ent,
                ghz_alt.cells, ghz_alt.min_ent, tetra_m3.cells, tetra_m2.cells,
                epr_output.cells);
  report(7, "figure-region reproduction (qualitative)",
         pass_a && pass_b && pass_c && pass_d && pass_e, detail);
}

void criterion_8_separable_soundness() {
  std::mt19937_64 rng(0x5ca1ab1e);
  std::uniform_real_distribution<double> uni01(0.0, 1.0);
  double min_ent = 1e300;
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % (n - 1));
    const double t_o = 0.25 + 0.73 * uni01(rng);
    const SchemeConfig config = config_for(n, m, t_o);
    const CoefficientTable table = coefficient_table(config);
    std::vector<GaussianState> parts;
    for (int j = 0; j < n; ++j) {
      const double s = 1.5 * uni01(rng);
      const double occ = 2.0 * uni01(rng);
      const double theta = 6.283185307179586 * uni01(rng);
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
      cov(0, 0) = (2.0 * occ + 1.0) * std::exp(-2.0 * s);
      cov(1, 1) = (2.0 * occ + 1.0) * std::exp(2.0 * s);
      Eigen::MatrixXd rot(2, 2);
      rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
      parts.emplace_back(Eigen::VectorXd::Zero(2),
                         Eigen::MatrixXd(rot * cov * rot.transpose()));
    }
    const GaussianState product = track(tensor(parts));
    const CertResult cert = certify(uv_input(config, table), product);
    min_ent = std::min(min_ent, cert.ent);
    if (cert.ent < 1.0) ++violations;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "0 violations in 200 states, min ent %.4f",
                min_ent);
  report(8, "randomized separable product states never certify",
         violations == 0 && min_ent >= 1.0, detail);
}

void criterion_9_physicality() {
  // States produced by the other criteria, plus the conditioned states of a
  // measurement chain.
  SchemeConfig config = config_for(3, 2, 0.9);
  config.input_state = ghz_state(3, 1.0);
  config.s_a = 1.0;
  config.s_b = 1.0;
  const CoefficientTable table = coefficient_table(config);
  GaussianState state = track(joint_input_state(config));
  for (const auto& step :
       beamsplitter_sequence(3, 2, 0.9, table.t_d, Variant::UniformLast)) {
    const int x = step.target.index - 1;
    const int y = step.ancilla.kind == ModeLabel::Kind::AncillaA ? 3 : 4;
    state = apply_symplectic(state,
                             beamsplitter_symplectic(5, x, y, step.t, step.r),
                             Eigen::VectorXd::Zero(10));
    track(state);
  }
  std::mt19937_64 rng(9);
  auto [rec_a, after_a] = homodyne_measure(state, 3, Axis::P, rng);
  track(after_a);
  auto [rec_b, after_b] = homodyne_measure(after_a, 4, Axis::Q, rng);
  track(after_b);
  track(displace(after_b, 0, Axis::Q, table.f[0] * rec_b.outcome));

  double worst = 0.0;
  for (const GaussianState& tracked : g_tracked_states) {
    const Eigen::VectorXd nu = symplectic_eigenvalues(tracked);
    if (nu.size() > 0) worst = std::max(worst, 1.0 - nu.minCoeff());
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "%zu states, min symplectic eigenvalue 1 - %.2e",
                g_tracked_states.size(), worst);
  report(9, "every produced state stays physical", worst < 1e-9, detail);
}

}  // namespace

int main() {
  criterion_1_compatibility();
  criterion_2_closed_t_d();
  criterion_3_coefficients_and_forms();
  criterion_4_min_s_b();
  criterion_5_ideal_limit();
  criterion_6_monte_carlo();
  criterion_7_figure_regions();
  criterion_8_separable_soundness();
  criterion_9_physicality();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria pass\n");
  return 0;
}
