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

#include "cvqnd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "cvqnd/entanglement.hpp"
#include "cvqnd/run_config.hpp"
#include "cvqnd/scheme.hpp"

namespace cvqnd {

namespace {

std::vector<double> t_o_grid(int count, double lo = 0.05, double hi = 0.999) {
  std::vector<double> values(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    values[static_cast<size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  return values;
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

SchemeConfig basic_config(int n, int m, double t_o,
                          Variant variant = Variant::UniformLast) {
  SchemeConfig config;
  config.n = n;
  config.m = m;
  config.t_o = t_o;
  config.variant = variant;
  return config;
}

class Suite {
 public:
  explicit Suite(VerifyReport* report) : report_(report) {}

  void add(std::string name, double deviation, double tolerance) {
    IdentityResult result;
    result.name = std::move(name);
    result.deviation = deviation;
    result.tolerance = tolerance;
    result.pass = deviation <= tolerance;
    report_->all_pass = report_->all_pass && result.pass;
    report_->identities.push_back(std::move(result));
  }

 private:
  VerifyReport* report_;
};

LinearForm sparse_form(int n, std::vector<std::tuple<ModeLabel, Axis, double>> terms) {
  LinearForm form(n);
  for (const auto& [mode, axis, value] : terms) {
    form.set_coeff(mode, axis, value);
  }
  return form;
}

// Closed readout forms for the common-transmission pattern. The ancilla-B
// momentum coefficient of the A readout is written both ways it appears in
// the coefficient relations; under compatibility they coincide.
struct ClosedReadouts {
  LinearForm p_a;
  LinearForm q_b;
  double p_b_coeff_direct = 0.0;
  double p_b_coeff_reduced = 0.0;
};

ClosedReadouts closed_readouts(int n, int m, double t_o, double t_d,
                               const CoefficientTable& table) {
  const double lead = t_d * std::pow(t_o, n - 1);
  LinearForm p_a(n);
  LinearForm q_b(n);
  for (int j = 1; j <= n; ++j) {
    const double sign = j == n ? -1.0 : 1.0;
    p_a.set_coeff(ModeLabel::target(j), Axis::P, sign * lead * table.f[j - 1]);
    q_b.set_coeff(ModeLabel::target(j), Axis::Q, sign * lead * table.g[j - 1]);
  }
  const double direct = 1.0 - t_d * t_d * (2.0 - std::pow(t_o, 2.0 * (n - m - 1)));
  const double reduced = 1.0 - std::pow(t_o, 2 * m);
  p_a.set_coeff(ModeLabel::ancilla_a(), Axis::P, lead);
  p_a.set_coeff(ModeLabel::ancilla_b(), Axis::P, direct);
  q_b.set_coeff(ModeLabel::ancilla_a(), Axis::Q, -reduced);
  q_b.set_coeff(ModeLabel::ancilla_b(), Axis::Q, lead);
  ClosedReadouts closed{std::move(p_a), std::move(q_b), direct, reduced};
  return closed;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  Suite suite(&report);

  std::vector<std::pair<int, int>> nm_pairs;
  for (int n = 2; n <= 8; ++n) {
    for (int m = 1; m <= n - 1; ++m) nm_pairs.emplace_back(n, m);
  }
  if (options.extra_nm) nm_pairs.push_back(*options.extra_nm);

  // Compatibility: the two readouts commute exactly at the closed-form t_d,
  // and the numeric root lands on it.
  for (int n = 2; n <= 8; ++n) {
    double worst_bracket = 0.0;
    double worst_root = 0.0;
    for (int m = 1; m <= n - 1; ++m) {
      for (double t_o : t_o_grid(20)) {
        const double closed = std::min(
            *compatibility_closed_form(n, m, t_o, Variant::UniformLast) +
                options.perturb_t_d,
            1.0 - 1e-9);
        worst_bracket = std::max(
            worst_bracket,
            std::abs(readout_commutator(n, m, t_o, closed, Variant::UniformLast)));
        const double root =
            solve_compatibility_numeric(n, m, t_o, Variant::UniformLast);
        worst_root =
            std::max(worst_root, std::abs(root - closed + options.perturb_t_d));
      }
    }
    char name[96];
    std::snprintf(name, sizeof(name),
                  "compatibility commutator vanishes (n=%d, all m)", n);
    suite.add(name, worst_bracket, 1e-12);
    std::snprintf(name, sizeof(name),
                  "numeric root matches the closed t_d (n=%d, all m)", n);
    suite.add(name, worst_root, 1e-10);
  }
  if (options.extra_nm) {
    const auto [n, m] = *options.extra_nm;
    double worst = 0.0;
    for (double t_o : t_o_grid(20)) {
      const double closed = std::min(
          *compatibility_closed_form(n, m, t_o, Variant::UniformLast) +
              options.perturb_t_d,
          1.0 - 1e-9);
      worst = std::max(
          worst,
          std::abs(readout_commutator(n, m, t_o, closed, Variant::UniformLast)));
    }
    char name[96];
    std::snprintf(name, sizeof(name),
                  "compatibility commutator vanishes (n=%d, m=%d)", n, m);
    suite.add(name, worst, 1e-12);
  }

  {
    double worst = 0.0;
    for (double t_o : t_o_grid(20)) {
      const double closed =
          std::min(*compatibility_closed_form(3, 2, t_o, Variant::AltBn) +
                       options.perturb_t_d,
                   1.0 - 1e-9);
      worst = std::max(
          worst, std::abs(readout_commutator(3, 2, t_o, closed, Variant::AltBn)));
      worst = std::max(
          worst, std::abs(solve_compatibility_numeric(3, 2, t_o, Variant::AltBn) -
                          closed + options.perturb_t_d));
    }
    suite.add("compatibility for the alt-bn tripartite setup", worst, 1e-10);
  }

  // Named distinguished-transmission expressions.
  {
    double w32 = 0.0, w42 = 0.0, w43 = 0.0, walt = 0.0;
    for (double t_o : t_o_grid(20)) {
      const double t2 = t_o * t_o;
      w32 = std::max(w32,
                     std::abs(solve_compatibility(3, 2, t_o, Variant::UniformLast) -
                              t2));
      w42 = std::max(w42,
                     std::abs(solve_compatibility(4, 2, t_o, Variant::UniformLast) -
                              t2 / std::sqrt(2.0 - t2)));
      w43 = std::max(w43,
                     std::abs(solve_compatibility(4, 3, t_o, Variant::UniformLast) -
                              t2 * t_o));
      walt = std::max(
          walt, std::abs(solve_compatibility(3, 2, t_o, Variant::AltBn) -
                         t_o / std::sqrt(t2 + (1.0 + t2) * (1.0 - t2 * t2))));
    }
    suite.add("t_d = t_o^2 for (n=3, m=2)", w32, 1e-12);
    suite.add("t_d = t_o^2/sqrt(2-t_o^2) for (n=4, m=2)", w42, 1e-12);
    suite.add("t_d = t_o^3 for (n=4, m=3)", w43, 1e-12);
    suite.add("alt-bn tripartite t_d expression", walt, 1e-12);
  }

  // Coefficient tables, readout forms and the gain constraint.
  {
    double worst_sum = 0.0;
    double worst_pa = 0.0;
    double worst_qb = 0.0;
    double worst_coeff_pair = 0.0;
    double worst_gains = 0.0;
    double worst_defect = 0.0;
    for (const auto& [n, m] : nm_pairs) {
      for (double t_o : t_o_grid(10)) {
        const SchemeConfig config = basic_config(n, m, t_o);
        const CoefficientTable table = coefficient_table(config);
        double scale = 0.0;
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
          sum += table.f[j] * table.g[j];
          scale += std::abs(table.f[j] * table.g[j]);
        }
        worst_sum = std::max(worst_sum, std::abs(sum) / std::max(1.0, scale));

        const ModeRegister reg =
            build_register(n, m, t_o, table.t_d, Variant::UniformLast);
        const ClosedReadouts closed =
            closed_readouts(n, m, t_o, table.t_d, table);
        worst_pa = std::max(
            worst_pa, rel_distance(reg.form(ModeLabel::ancilla_a(), Axis::P),
                                   closed.p_a));
        worst_qb = std::max(
            worst_qb, rel_distance(reg.form(ModeLabel::ancilla_b(), Axis::Q),
                                   closed.q_b));
        worst_coeff_pair = std::max(
            worst_coeff_pair,
            rel_gap(closed.p_b_coeff_direct, closed.p_b_coeff_reduced));

        const FeedforwardGains gains =
            feedforward_gains(n, m, t_o, Variant::UniformLast);
        for (int j = 0; j < n; ++j) {
          worst_gains = std::max(worst_gains, rel_gap(gains.q[j], table.f[j]));
          worst_gains = std::max(worst_gains, rel_gap(gains.p[j], table.g[j]));
        }
        worst_defect = std::max(worst_defect, max_symplectic_defect(reg));
      }
    }
    suite.add("sum_j f_j g_j vanishes (relative to sum |f_j g_j|)", worst_sum,
              1e-12);
    suite.add("p_A readout matches its closed form", worst_pa, 1e-12);
    suite.add("q_B readout matches its closed form", worst_qb, 1e-12);
    suite.add("the two printed ancilla-B coefficients coincide",
              worst_coeff_pair, 1e-12);
    suite.add("feedforward gains equal the table coefficients", worst_gains,
              1e-12);
    suite.add("register brackets stay canonical across the cascade",
              worst_defect, 1e-12);
  }

  // Output forms: closed expressions, the expanded tripartite rows, the coupling
  // gain correspondence, and the pre-modulation (zero gain) forms.
  {
    double worst_out = 0.0;
    double worst_gain_corr = 0.0;
    for (const auto& [n, m] : nm_pairs) {
      for (double t_o : t_o_grid(10)) {
        const SchemeConfig config = basic_config(n, m, t_o);
        const SchemeRun run = run_heisenberg(config);
        const CoefficientTable& table = run.table;
        const double back = table.r_d * table.r_d - table.t_d * table.t_d;
        for (int j = 1; j <= n; ++j) {
          LinearForm want_q(n);
          LinearForm want_p(n);
          if (j < n) {
            want_q = sparse_form(
                n, {{ModeLabel::target(j), Axis::Q, 1.0},
                    {ModeLabel::ancilla_a(), Axis::Q, -table.f[j - 1]}});
            want_p = sparse_form(
                n, {{ModeLabel::target(j), Axis::P, 1.0},
                    {ModeLabel::target(n), Axis::P,
                     2.0 * table.r_d * table.t_d * table.g[j - 1]},
                    {ModeLabel::ancilla_b(), Axis::P, back * table.g[j - 1]}});
            worst_gain_corr = std::max(
                worst_gain_corr,
                rel_gap(run.out_p[j - 1].coeff(ModeLabel::target(n), Axis::P),
                        -table.qnd_gains[j - 1]));
          } else {
            want_q.set_coeff(ModeLabel::target(n), Axis::Q, 1.0);
            for (int i = 1; i <= n - 1; ++i) {
              want_q.set_coeff(ModeLabel::target(i), Axis::Q,
                               -2.0 * table.r_d * table.t_d * table.g[i - 1]);
            }
            want_q.set_coeff(ModeLabel::ancilla_a(), Axis::Q,
                             -back * table.f[n - 1]);
            want_p = sparse_form(
                n, {{ModeLabel::target(n), Axis::P, 1.0},
                    {ModeLabel::ancilla_b(), Axis::P, table.g[n - 1]}});
          }
          worst_out = std::max(worst_out,
                               rel_distance(run.out_q[j - 1], want_q));
          worst_out = std::max(worst_out,
                               rel_distance(run.out_p[j - 1], want_p));
        }
      }
    }
    suite.add("output forms match the closed expressions", worst_out, 1e-12);
    suite.add("momentum coupling equals the tabulated gains -G_j",
              worst_gain_corr, 1e-12);
  }

  {
    // Worked tripartite rows, common-transmission pattern.
    double worst = 0.0;
    for (double t_o : t_o_grid(20)) {
      const double t_d = t_o * t_o;
      const double r_o = std::sqrt(1.0 - t_o * t_o);
      const double r_d = std::sqrt(1.0 - t_d * t_d);
      const double back = r_d * r_d - t_d * t_d;
      const SchemeRun run = run_heisenberg(basic_config(3, 2, t_o));
      const auto q1 = sparse_form(3, {{ModeLabel::target(1), Axis::Q, 1.0},
                                      {ModeLabel::ancilla_a(), Axis::Q, r_o / t_o}});
      const auto p1 = sparse_form(
          3, {{ModeLabel::target(1), Axis::P, 1.0},
              {ModeLabel::target(3), Axis::P, -2.0 * r_o * r_d * t_o},
              {ModeLabel::ancilla_b(), Axis::P, -(r_o * t_o / t_d) * back}});
      const auto q2 =
          sparse_form(3, {{ModeLabel::target(2), Axis::Q, 1.0},
                          {ModeLabel::ancilla_a(), Axis::Q, r_o / (t_o * t_o)}});
      const auto p2 = sparse_form(
          3, {{ModeLabel::target(2), Axis::P, 1.0},
              {ModeLabel::target(3), Axis::P, -2.0 * r_o * r_d},
              {ModeLabel::ancilla_b(), Axis::P, -(r_o / t_d) * back}});
      const auto q3 = sparse_form(
          3, {{ModeLabel::target(3), Axis::Q, 1.0},
              {ModeLabel::target(1), Axis::Q, 2.0 * r_o * r_d * t_o},
              {ModeLabel::target(2), Axis::Q, 2.0 * r_o * r_d},
              {ModeLabel::ancilla_a(), Axis::Q,
               (r_d / (t_o * t_o)) * (1.0 - 2.0 * std::pow(t_o, 4))}});
      const auto p3 =
          sparse_form(3, {{ModeLabel::target(3), Axis::P, 1.0},
                          {ModeLabel::ancilla_b(), Axis::P, r_d / t_d}});
      worst = std::max({worst, rel_distance(run.out_q[0], q1),
                        rel_distance(run.out_p[0], p1),
                        rel_distance(run.out_q[1], q2),
                        rel_distance(run.out_p[1], p2),
                        rel_distance(run.out_q[2], q3),
                        rel_distance(run.out_p[2], p3)});
    }
    suite.add("tripartite output rows match the hand expansion", worst, 1e-12);
  }

  {
    // Worked tripartite readouts for both splitter patterns.
    double worst_uniform = 0.0;
    double worst_alt = 0.0;
    for (double t_o : t_o_grid(20)) {
      const double r_o = std::sqrt(1.0 - t_o * t_o);
      {
        const double t_d = t_o * t_o;
        const double r_d = std::sqrt(1.0 - t_d * t_d);
        const ModeRegister reg =
            build_register(3, 2, t_o, t_d, Variant::UniformLast);
        const auto q_b = sparse_form(
            3, {{ModeLabel::target(1), Axis::Q, -r_o * t_o * t_o * t_o},
                {ModeLabel::target(2), Axis::Q, -r_o * t_o * t_o},
                {ModeLabel::target(3), Axis::Q, -r_d * t_o * t_o},
                {ModeLabel::ancilla_a(), Axis::Q, -(1.0 - std::pow(t_o, 4))},
                {ModeLabel::ancilla_b(), Axis::Q, t_d * t_o * t_o}});
        const auto p_a = sparse_form(
            3, {{ModeLabel::target(1), Axis::P, -r_o * t_d * t_o},
                {ModeLabel::target(2), Axis::P, -r_o * t_d},
                {ModeLabel::target(3), Axis::P, r_d * t_d},
                {ModeLabel::ancilla_a(), Axis::P, t_d * t_o * t_o},
                {ModeLabel::ancilla_b(), Axis::P, r_d * r_d}});
        worst_uniform = std::max(
            {worst_uniform,
             rel_distance(reg.form(ModeLabel::ancilla_b(), Axis::Q), q_b),
             rel_distance(reg.form(ModeLabel::ancilla_a(), Axis::P), p_a)});
      }
      {
        const double t_d = solve_compatibility(3, 2, t_o, Variant::AltBn);
        const double r_d = std::sqrt(1.0 - t_d * t_d);
        const ModeRegister reg = build_register(3, 2, t_o, t_d, Variant::AltBn);
        const auto q_b = sparse_form(
            3, {{ModeLabel::target(1), Axis::Q, -r_o * std::pow(t_o, 3)},
                {ModeLabel::target(2), Axis::Q, -r_o * t_o * t_o},
                {ModeLabel::target(3), Axis::Q, -r_o * t_o * t_o},
                {ModeLabel::ancilla_a(), Axis::Q, -(1.0 - std::pow(t_o, 4))},
                {ModeLabel::ancilla_b(), Axis::Q, std::pow(t_o, 3)}});
        const auto p_a = sparse_form(
            3, {{ModeLabel::target(1), Axis::P, -r_o * t_d * t_o},
                {ModeLabel::target(2), Axis::P, -r_o * t_d},
                {ModeLabel::target(3), Axis::P, t_o * r_d},
                {ModeLabel::ancilla_a(), Axis::P, t_o * t_o * t_d},
                {ModeLabel::ancilla_b(), Axis::P, r_o * r_d}});
        worst_alt = std::max(
            {worst_alt,
             rel_distance(reg.form(ModeLabel::ancilla_b(), Axis::Q), q_b),
             rel_distance(reg.form(ModeLabel::ancilla_a(), Axis::P), p_a)});
      }
    }
    suite.add("tripartite readout rows match the hand expansion", worst_uniform,
              1e-12);
    suite.add("alt-bn readout rows match the hand expansion", worst_alt, 1e-12);
  }

  {
    // Zero feedforward gains leave the pre-modulation register forms.
    double worst = 0.0;
    for (const auto& [n, m] : nm_pairs) {
      const double t_o = 0.8;
      SchemeConfig config = basic_config(n, m, t_o);
      config.gain_overrides = GainOverrides{
          std::vector<double>(static_cast<size_t>(n), 0.0),
          std::vector<double>(static_cast<size_t>(n), 0.0)};
      const SchemeRun run = run_heisenberg(config);
      const ModeRegister reg =
          build_register(n, m, t_o, run.table.t_d, Variant::UniformLast);
      const double r_o = std::sqrt(1.0 - t_o * t_o);
      const double t_d = run.table.t_d;
      const double r_d = run.table.r_d;
      for (int j = 1; j <= n; ++j) {
        // Closed pre-modulation coefficients; mode n uses the sign that the
        // cascade (and the final expanded rows) actually produce.
        LinearForm want(n);
        if (j <= m) {
          want.set_coeff(ModeLabel::target(j), Axis::Q, 1.0);
          for (int i = 1; i <= m; ++i) {
            want.add_coeff(ModeLabel::target(i), Axis::Q,
                           -r_o * r_o * std::pow(t_o, 2 * m - j - i));
          }
          for (int i = m + 1; i <= n - 1; ++i) {
            want.add_coeff(ModeLabel::target(i), Axis::Q,
                           -r_o * r_o * std::pow(t_o, -j - 1 + i));
          }
          want.add_coeff(ModeLabel::target(n), Axis::Q,
                         -r_o * r_d * std::pow(t_o, n - j - 1));
          want.set_coeff(ModeLabel::ancilla_a(), Axis::Q,
                         r_o * std::pow(t_o, 2 * m - j));
          want.set_coeff(ModeLabel::ancilla_b(), Axis::Q,
                         r_o * t_d * std::pow(t_o, n - j - 1));
        } else if (j <= n - 1) {
          want.set_coeff(ModeLabel::target(j), Axis::Q, 1.0);
          for (int i = 1; i <= m; ++i) {
            want.add_coeff(ModeLabel::target(i), Axis::Q,
                           -r_o * r_o * std::pow(t_o, j - 1 - i));
          }
          for (int i = m + 1; i <= n - 1; ++i) {
            want.add_coeff(ModeLabel::target(i), Axis::Q,
                           -r_o * r_o * std::pow(t_o, j - 2 * (m + 1) + i));
          }
          want.add_coeff(ModeLabel::target(n), Axis::Q,
                         -r_o * r_d * std::pow(t_o, n + j - 2 * (m + 1)));
          want.set_coeff(ModeLabel::ancilla_a(), Axis::Q,
                         r_o * std::pow(t_o, j - 1));
          want.set_coeff(ModeLabel::ancilla_b(), Axis::Q,
                         r_o * t_d * std::pow(t_o, n + j - 2 * (m + 1)));
        } else {
          const double inner = 2.0 - std::pow(t_o, 2.0 * (n - m - 1));
          want.set_coeff(ModeLabel::target(n), Axis::Q,
                         1.0 - r_d * r_d * inner);
          for (int i = 1; i <= m; ++i) {
            want.add_coeff(ModeLabel::target(i), Axis::Q,
                           r_o * r_d * std::pow(t_o, n - 1 - i));
          }
          for (int i = m + 1; i <= n - 1; ++i) {
            want.add_coeff(ModeLabel::target(i), Axis::Q,
                           r_o * r_d * std::pow(t_o, n - 2 * (m + 1) + i));
          }
          want.set_coeff(ModeLabel::ancilla_a(), Axis::Q,
                         -r_d * std::pow(t_o, n - 1));
          want.set_coeff(ModeLabel::ancilla_b(), Axis::Q, r_d * t_d * inner);
        }
        worst = std::max(worst, rel_distance(run.out_q[j - 1], want));
        worst = std::max(
            worst, rel_distance(run.out_q[j - 1],
                                reg.form(ModeLabel::target(j), Axis::Q)));
      }
    }
    suite.add("zero gains reproduce the pre-modulation forms", worst, 1e-12);
  }

  {
    // Split commutators vanish independently, and a perturbed t_d breaks
    // compatibility.
    double worst_split = 0.0;
    double min_perturbed = 1e300;
    for (const auto& [n, m] : nm_pairs) {
      for (double t_o : {0.3, 0.7, 0.95}) {
        const double t_d = solve_compatibility(n, m, t_o, Variant::UniformLast);
        const ModeRegister reg =
            build_register(n, m, t_o, t_d, Variant::UniformLast);
        const LinearForm q_b = reg.form(ModeLabel::ancilla_b(), Axis::Q);
        const LinearForm p_a = reg.form(ModeLabel::ancilla_a(), Axis::P);
        worst_split = std::max(
            worst_split, std::abs(bracket(q_b.target_part(), p_a.target_part())));
        worst_split = std::max(
            worst_split,
            std::abs(bracket(q_b.ancilla_part(), p_a.ancilla_part())));
        // Normalized split commutator at the shifted t_d: the raw bracket
        // scales like the square of the tiny readout lead factor, so compare
        // the cancellation quality instead of the absolute size.
        const double shifted = std::min(t_d + 0.01, 1.0 - 1e-9);
        const ModeRegister off =
            build_register(n, m, t_o, shifted, Variant::UniformLast);
        const LinearForm q_off =
            off.form(ModeLabel::ancilla_b(), Axis::Q).target_part();
        const LinearForm p_off =
            off.form(ModeLabel::ancilla_a(), Axis::P).target_part();
        double scale = 0.0;
        for (int j = 1; j <= n; ++j) {
          scale += std::abs(q_off.coeff(ModeLabel::target(j), Axis::Q) *
                            p_off.coeff(ModeLabel::target(j), Axis::P));
        }
        min_perturbed = std::min(
            min_perturbed,
            std::abs(bracket(q_off, p_off)) / (kQuadCommutator * scale));
      }
    }
    suite.add("target and ancilla split commutators vanish independently",
              worst_split, 1e-12);
    // Pass when every perturbed commutator is clearly nonzero relative to
    // its own term scale (the at-root residual sits around 1e-16).
    suite.add("perturbing t_d by 0.01 breaks compatibility",
              min_perturbed > 1e-5 ? 0.0 : 1.0, 0.5);
  }

  // Witness minimization: exhaustive scan against the closed expressions.
  {
    double w32 = 0.0, w42 = 0.0, w43 = 0.0, walt = 0.0, wout = 0.0;
    for (double t_o : t_o_grid(50)) {
      const double t2 = t_o * t_o;
      {
        const SchemeConfig config = basic_config(3, 2, t_o);
        const CoefficientTable table = coefficient_table(config);
        const double brute = min_s_b(uv_input(config, table)).value;
        w32 = std::max(w32, rel_gap(brute, 2.0 * (1.0 - t2) / t2));
        const double brute_out = min_s_b(uv_output(config, table)).value;
        wout = std::max(
            wout, rel_gap(brute_out, std::abs(1.0 - 2.0 * t2 * t2) * 2.0 *
                                         (1.0 - t2) / t2));
      }
      {
        const SchemeConfig config = basic_config(4, 2, t_o);
        const CoefficientTable table = coefficient_table(config);
        const double brute = min_s_b(uv_input(config, table)).value;
        w42 = std::max(w42, rel_gap(brute, 2.0 * (1.0 - t2) *
                                               std::sqrt(2.0 - t2) /
                                               (t2 * t_o)));
      }
      {
        const SchemeConfig config = basic_config(4, 3, t_o);
        const CoefficientTable table = coefficient_table(config);
        const double brute = min_s_b(uv_input(config, table)).value;
        w43 = std::max(w43, rel_gap(brute, 2.0 * (1.0 - t2) / t2));
      }
      {
        const SchemeConfig config = basic_config(3, 2, t_o, Variant::AltBn);
        const CoefficientTable table = coefficient_table(config);
        const double brute = min_s_b(uv_input(config, table)).value;
        walt = std::max(
            walt, rel_gap(brute, 2.0 * (1.0 - t2) *
                                     std::sqrt(t2 + (1.0 + t2) * (1.0 - t2 * t2)) /
                                     t_o));
      }
    }
    suite.add("min S_B closed form, (n=3, m=2) input side", w32, 1e-10);
    suite.add("min S_B closed form, (n=4, m=2) input side", w42, 1e-10);
    suite.add("min S_B closed form, (n=4, m=3) input side", w43, 1e-10);
    suite.add("min S_B closed form, alt-bn tripartite input side", walt, 1e-10);
    suite.add("min S_B closed form, tripartite output side", wout, 1e-10);
  }

  {
    // Edge-product shortcut on both sides across the (n, m) grid.
    double worst_in = 0.0;
    double worst_out = 0.0;
    for (const auto& [n, m] : nm_pairs) {
      for (double t_o : {0.3, 0.6, 0.9, 0.98}) {
        const SchemeConfig config = basic_config(n, m, t_o);
        worst_in = std::max(
            worst_in,
            rel_gap(min_s_b(uv_input(config, coefficient_table(config))).value,
                    min_s_b_closed(config, Side::Input)));
        worst_out = std::max(
            worst_out,
            rel_gap(min_s_b(uv_output(config, coefficient_table(config))).value,
                    min_s_b_closed(config, Side::Output)));
      }
    }
    suite.add("input minimum sits at an edge product |f_j g_j|", worst_in, 1e-10);
    suite.add("output minimum sits at an edge product", worst_out, 1e-10);
  }

  {
    // Readouts re-expressed over the produced output modes.
    double worst = 0.0;
    for (const auto& [n, m] : nm_pairs) {
      for (double t_o : {0.4, 0.75, 0.95}) {
        const SchemeConfig config = basic_config(n, m, t_o);
        const SchemeRun run = run_heisenberg(config);
        const CoefficientTable& table = run.table;
        const double lead = table.t_d * std::pow(t_o, n - 1);
        const double back = table.r_d * table.r_d - table.t_d * table.t_d;
        std::vector<std::pair<double, LinearForm>> terms;
        for (int j = 0; j < n - 1; ++j) {
          terms.emplace_back(lead * table.f[j], run.out_p[j]);
        }
        terms.emplace_back(lead * back * table.f[n - 1], run.out_p[n - 1]);
        terms.emplace_back(lead, LinearForm::basis(n, ModeLabel::ancilla_a(),
                                                   Axis::P));
        terms.emplace_back(1.0 - std::pow(t_o, 2 * m),
                           LinearForm::basis(n, ModeLabel::ancilla_b(), Axis::P));
        worst = std::max(worst,
                         rel_distance(lf_combine(terms), run.readout_p_a));

        std::vector<std::pair<double, LinearForm>> terms_v;
        for (int j = 0; j < n - 1; ++j) {
          terms_v.emplace_back(-lead * back * table.g[j], run.out_q[j]);
        }
        terms_v.emplace_back(-lead * table.g[n - 1], run.out_q[n - 1]);
        terms_v.emplace_back(
            -(1.0 - table.t_d * table.t_d *
                        (2.0 - std::pow(t_o, 2.0 * (n - m - 1)))),
            LinearForm::basis(n, ModeLabel::ancilla_a(), Axis::Q));
        terms_v.emplace_back(lead,
                             LinearForm::basis(n, ModeLabel::ancilla_b(), Axis::Q));
        worst = std::max(worst,
                         rel_distance(lf_combine(terms_v), run.readout_q_b));
      }
    }
    suite.add("readouts re-expressed over the output modes", worst, 1e-12);
  }

  {
    // Readout variances split into target and ancilla parts, and the witness
    // variances equal the scaled target parts.
    double worst_split = 0.0;
    double worst_witness = 0.0;
    for (double t_o : {0.6, 0.85, 0.95}) {
      SchemeConfig config = basic_config(3, 2, t_o);
      config.s_a = 0.6;
      config.s_b = 0.4;
      config.input_state = ghz_state(3, 0.8);
      config.k_a = 1.7;
      config.k_b = 0.9;
      const SchemeRun run = run_analytic(config);
      const GaussianState joint = joint_input_state(config);
      const double split_pa =
          config.k_a * (quad_variance(joint, run.readout_p_a.target_part()) +
                        quad_variance(joint, run.readout_p_a.ancilla_part()));
      const double split_qb =
          config.k_b * (quad_variance(joint, run.readout_q_b.target_part()) +
                        quad_variance(joint, run.readout_q_b.ancilla_part()));
      worst_split = std::max({worst_split, rel_gap(run.var_p_a, split_pa),
                              rel_gap(run.var_q_b, split_qb)});

      const CoefficientTable table = coefficient_table(config);
      const UVSpec spec = uv_input(config, table);
      const CertResult cert = certify(spec, *config.input_state);
      const double lead = table.t_d * std::pow(t_o, config.n - 1);
      const double from_readout =
          quad_variance(joint, run.readout_p_a.target_part()) / (lead * lead);
      worst_witness = std::max(worst_witness, rel_gap(cert.var_u, from_readout));
      const double from_readout_v =
          quad_variance(joint, run.readout_q_b.target_part()) / (lead * lead);
      worst_witness = std::max(worst_witness, rel_gap(cert.var_v, from_readout_v));
    }
    suite.add("readout variance splits into target and ancilla parts",
              worst_split, 1e-10);
    suite.add("witness variances equal the scaled readout target parts",
              worst_witness, 1e-10);
  }

  {
    // Ideal-coupling limit at 60 dB ancilla squeezing, relative to the
    // covariance scale.
    double worst = 0.0;
    const double s_anc = db_to_squeezing(60.0);
    for (const auto& [n, m, state] :
         std::vector<std::tuple<int, int, GaussianState>>{
             {3, 2, vacuum(3)},
             {3, 2, ghz_state(3, 1.0)},
             {4, 2, vacuum(4)},
             {4, 3, ghz_state(4, 1.0)}}) {
      SchemeConfig config = basic_config(n, m, 0.9);
      config.s_a = s_anc;
      config.s_b = s_anc;
      config.input_state = state;
      const SchemeRun run = run_analytic(config);
      Eigen::MatrixXd gains(n - 1, 1);
      for (int j = 0; j < n - 1; ++j) gains(j, 0) = run.table.qnd_gains[j];
      const GaussianState ideal = apply_symplectic(
          state, ideal_qnd_map(gains), Eigen::VectorXd::Zero(2 * n));
      const double scale =
          std::max(1.0, ideal.cov().cwiseAbs().maxCoeff());
      worst = std::max(worst, (run.output_state->cov() - ideal.cov())
                                      .cwiseAbs()
                                      .maxCoeff() /
                                  scale);
    }
    suite.add("60 dB ancillas reach the ideal coupling map", worst, 1e-3);
  }

  {
    // Ideal map: symplectic for random gains, ladder form for one probe.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uniform(-2.0, 2.0);
    double worst_sympl = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int n_signal = 1 + static_cast<int>(rng() % 4);
      const int n_probe = 1 + static_cast<int>(rng() % 4);
      Eigen::MatrixXd gains(n_signal, n_probe);
      for (int i = 0; i < n_signal; ++i) {
        for (int j = 0; j < n_probe; ++j) gains(i, j) = uniform(rng);
      }
      const Eigen::MatrixXd map = ideal_qnd_map(gains);
      const Eigen::MatrixXd form = symplectic_form(n_signal + n_probe);
      worst_sympl = std::max(
          worst_sympl,
          (map * form * map.transpose() - form).cwiseAbs().maxCoeff());
    }
    suite.add("ideal coupling map is symplectic for random gains", worst_sympl,
              1e-12);

    Eigen::MatrixXd column(3, 1);
    column << 0.3, -1.1, 2.0;
    const Eigen::MatrixXd map = ideal_qnd_map(column);
    double worst_ladder = 0.0;
    Eigen::MatrixXd want = Eigen::MatrixXd::Identity(8, 8);
    for (int j = 0; j < 3; ++j) {
      want(2 * j + 1, 7) = -column(j, 0);
      want(6, 2 * j) = column(j, 0);
    }
    worst_ladder = (map - want).cwiseAbs().maxCoeff();
    suite.add("single-probe ideal map has the ladder form", worst_ladder, 0.0);
  }

  {
    // Trajectory statistics against the analytic output state.
    SchemeConfig config = basic_config(3, 2, 0.9);
    config.s_a = 1.0;
    config.s_b = 1.0;
    config.input_state = ghz_state(3, 1.0);
    const SchemeRun run = run_analytic(config);
    const MonteCarloResult mc =
        run_monte_carlo(config, options.mc_samples, options.mc_seed);
    const Eigen::MatrixXd& analytic = run.output_state->cov();
    const Eigen::MatrixXd scatter_cov = analytic - mc.conditional_cov;
    double worst_cov = 0.0;
    double worst_mean = 0.0;
    const double n_samples = static_cast<double>(mc.samples);
    for (int i = 0; i < analytic.rows(); ++i) {
      worst_mean = std::max(
          worst_mean,
          std::abs(mc.mean[i]) /
              (5.0 * std::sqrt(std::max(scatter_cov(i, i), 0.0) / n_samples) +
               1e-12));
      for (int j = 0; j < analytic.cols(); ++j) {
        const double se =
            std::sqrt(std::max(scatter_cov(i, i) * scatter_cov(j, j) +
                                   scatter_cov(i, j) * scatter_cov(i, j),
                               0.0) /
                      n_samples);
        worst_cov = std::max(worst_cov, std::abs(mc.cov(i, j) - analytic(i, j)) /
                                            (5.0 * se + 1e-12));
      }
    }
    suite.add("trajectory covariance within 5 standard errors", worst_cov, 1.0);
    suite.add("trajectory means vanish within 5 standard errors", worst_mean,
              1.0);
  }

  {
    // Separable product states never certify.
    std::mt19937_64 rng(options.mc_seed ^ 0xabcdef);
    std::uniform_real_distribution<double> uni01(0.0, 1.0);
    double min_ent = 1e300;
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 3);
      const int m = 1 + static_cast<int>(rng() % (n - 1));
      const double t_o = 0.3 + 0.68 * uni01(rng);
      const SchemeConfig config = basic_config(n, m, t_o);
      const CoefficientTable table = coefficient_table(config);
      std::vector<GaussianState> parts;
      for (int j = 0; j < n; ++j) {
        const double s = 1.5 * uni01(rng);
        const double occupancy = 2.0 * uni01(rng);
        const double theta = 6.283185307179586 * uni01(rng);
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
        cov(0, 0) = (2.0 * occupancy + 1.0) * std::exp(-2.0 * s);
        cov(1, 1) = (2.0 * occupancy + 1.0) * std::exp(2.0 * s);
        Eigen::MatrixXd rot(2, 2);
        rot << std::cos(theta), -std::sin(theta), std::sin(theta),
            std::cos(theta);
        parts.emplace_back(Eigen::VectorXd::Zero(2),
                           Eigen::MatrixXd(rot * cov * rot.transpose()));
      }
      const CertResult cert = certify(uv_input(config, table), tensor(parts));
      min_ent = std::min(min_ent, cert.ent);
    }
    suite.add("separable product states never certify (deviation below 1)",
              std::max(0.0, 1.0 - min_ent), 0.0);
  }

  {
    // Witness invariances: joint rescaling of (a, b) and the alpha = beta
    // calibration.
    const SchemeConfig config = basic_config(3, 2, 0.92);
    const CoefficientTable table = coefficient_table(config);
    const GaussianState state = ghz_state(3, 1.0);
    const CertResult base = certify(uv_input(config, table), state);
    double worst = 0.0;
    for (double factor : {0.25, 3.0, 17.0}) {
      UVSpec spec = uv_input(config, table);
      spec.a *= factor;
      spec.b *= factor;
      const CertResult scaled = certify(spec, state);
      worst = std::max(worst, rel_gap(scaled.ent, base.ent));
      if (scaled.certified != base.certified) worst = 1.0;
    }
    SchemeConfig calibrated = config;
    calibrated.alpha = 4.0;
    calibrated.beta = 4.0;
    const CertResult cal = certify(uv_input(calibrated, table), state);
    worst = std::max(worst, rel_gap(cal.ent, base.ent));
    worst = std::max(worst, rel_gap(cal.var_u, 4.0 * base.var_u));
    worst = std::max(worst, rel_gap(cal.min_s_b, 4.0 * base.min_s_b));
    suite.add("witness ratio invariant under joint rescaling and calibration",
              worst, 1e-12);
  }

  {
    // Physicality of everything the analytic pipeline produces.
    double worst = 0.0;
    for (const auto& [n, m] : nm_pairs) {
      SchemeConfig config = basic_config(n, m, 0.9);
      config.s_a = 0.8;
      config.s_b = 0.8;
      config.input_state = ghz_state(n, 0.7);
      const SchemeRun run = run_analytic(config);
      const Eigen::VectorXd nu = symplectic_eigenvalues(*run.output_state);
      worst = std::max(worst, std::max(0.0, 1.0 - nu.minCoeff()));
    }
    suite.add("analytic output states stay physical", worst, 1e-9);
  }

  return report;
}

bool print_verify_report(std::ostream& out, const VerifyReport& report) {
  size_t passed = 0;
  for (const IdentityResult& identity : report.identities) {
    char line[192];
    std::snprintf(line, sizeof(line), "[%s] %-64s max dev %.3e (tol %.1e)",
                  identity.pass ? "PASS" : "FAIL", identity.name.c_str(),
                  identity.deviation, identity.tolerance);
    out << line << '\n';
    if (identity.pass) ++passed;
  }
  out << passed << '/' << report.identities.size() << " identities pass\n";
  return report.all_pass;
}

}  // namespace cvqnd
