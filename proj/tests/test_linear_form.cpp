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

#include <doctest.h>

#include <random>

#include "cvqnd/mode_register.hpp"

using namespace cvqnd;

namespace {

const ModeLabel kA = ModeLabel::ancilla_a();
const ModeLabel kB = ModeLabel::ancilla_b();

LinearForm random_form(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  LinearForm form(n);
  for (int j = 1; j <= n; ++j) {
    form.set_coeff(ModeLabel::target(j), Axis::Q, uniform(rng));
    form.set_coeff(ModeLabel::target(j), Axis::P, uniform(rng));
  }
  form.set_coeff(kA, Axis::Q, uniform(rng));
  form.set_coeff(kA, Axis::P, uniform(rng));
  form.set_coeff(kB, Axis::Q, uniform(rng));
  form.set_coeff(kB, Axis::P, uniform(rng));
  return form;
}

}  // namespace

TEST_CASE("basis forms carry a single unit coefficient") {
  const LinearForm form = LinearForm::basis(3, ModeLabel::target(1), Axis::Q);
  CHECK(form.coeff(ModeLabel::target(1), Axis::Q) == 1.0);
  CHECK(form.coefficients().cwiseAbs().sum() == 1.0);
  CHECK(form.constant() == 0.0);

  const LinearForm anc = LinearForm::basis(3, kA, Axis::P);
  CHECK(anc.coeff(kA, Axis::P) == 1.0);
  CHECK(anc.coefficients().cwiseAbs().sum() == 1.0);
}

TEST_CASE("canonical pairs bracket to the commutator constant") {
  for (int n : {1, 2, 5}) {
    const auto q = LinearForm::basis(n, ModeLabel::target(1), Axis::Q);
    const auto p = LinearForm::basis(n, ModeLabel::target(1), Axis::P);
    CHECK(bracket(q, p) == kQuadCommutator);
    if (n >= 2) {
      const auto p2 = LinearForm::basis(n, ModeLabel::target(2), Axis::P);
      CHECK(bracket(q, p2) == 0.0);
    }
  }
}

TEST_CASE("lf_combine is a coefficient-wise weighted sum") {
  std::mt19937_64 rng(11);
  const LinearForm u = random_form(3, rng);
  const LinearForm v = random_form(3, rng);

  CHECK(max_coeff_distance(lf_combine({{1.0, u}, {0.0, v}}), u) == 0.0);

  const LinearForm two_q = lf_combine({{2.0, LinearForm::basis(3, ModeLabel::target(1), Axis::Q)}});
  CHECK(two_q.coeff(ModeLabel::target(1), Axis::Q) == 2.0);

  const LinearForm mix = lf_combine({{0.25, u}, {-1.5, v}});
  for (int slot = 0; slot < mix.n_slots(); ++slot) {
    for (Axis axis : {Axis::Q, Axis::P}) {
      CHECK(mix.coeff_at(slot, axis) ==
            doctest::Approx(0.25 * u.coeff_at(slot, axis) -
                            1.5 * v.coeff_at(slot, axis))
                .epsilon(1e-14));
    }
  }
}

TEST_CASE("lf_combine rejects mismatched mode sets") {
  const LinearForm small(2);
  const LinearForm large(3);
  CHECK_THROWS_AS(lf_combine({{1.0, small}, {1.0, large}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bracket(small, large), std::invalid_argument);
}

TEST_CASE("bracket is antisymmetric and bilinear") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uniform(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const LinearForm u = random_form(4, rng);
    const LinearForm v = random_form(4, rng);
    const LinearForm w = random_form(4, rng);
    const double a = uniform(rng);
    const double b = uniform(rng);
    CHECK(bracket(u, v) == doctest::Approx(-bracket(v, u)).epsilon(1e-13));
    const double lhs = bracket(lf_combine({{a, u}, {b, w}}), v);
    CHECK(lhs == doctest::Approx(a * bracket(u, v) + b * bracket(w, v))
                     .epsilon(1e-12));
  }
}

TEST_CASE("identity and swap beam splitters") {
  const ModeRegister reg(3);
  const ModeRegister same =
      apply_beamsplitter(reg, ModeLabel::target(1), kA, 1.0, 0.0);
  for (Axis axis : {Axis::Q, Axis::P}) {
    CHECK(max_coeff_distance(same.form(ModeLabel::target(1), axis),
                             reg.form(ModeLabel::target(1), axis)) == 0.0);
  }

  const ModeRegister swapped =
      apply_beamsplitter(reg, ModeLabel::target(1), kA, 0.0, 1.0);
  CHECK(swapped.form(ModeLabel::target(1), Axis::Q).coeff(kA, Axis::Q) == 1.0);
  CHECK(swapped.form(kA, Axis::Q).coeff(ModeLabel::target(1), Axis::Q) == -1.0);
}

TEST_CASE("beam splitters preserve every canonical bracket") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    ModeRegister reg(n);
    for (int step = 0; step < 12; ++step) {
      const int slot_x = static_cast<int>(rng() % (n + 2));
      int slot_y = static_cast<int>(rng() % (n + 2));
      if (slot_x == slot_y) slot_y = (slot_y + 1) % (n + 2);
      const auto label = [&](int slot) {
        if (slot < n) return ModeLabel::target(slot + 1);
        return slot == n ? kA : kB;
      };
      const double theta = 6.2831853 * uniform(rng);
      reg = apply_beamsplitter(reg, label(slot_x), label(slot_y),
                               std::cos(theta), std::sin(theta));
    }
    CHECK(max_symplectic_defect(reg) < 1e-12);
  }
}

TEST_CASE("a beam splitter followed by its reverse is the identity") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    ModeRegister reg(3);
    reg = apply_beamsplitter(reg, ModeLabel::target(2), kB, 0.6, 0.8);
    const double theta = 6.2831853 * uniform(rng);
    const double t = std::cos(theta);
    const double r = std::sin(theta);
    const ModeRegister back = apply_beamsplitter(
        apply_beamsplitter(reg, ModeLabel::target(1), kA, t, r),
        ModeLabel::target(1), kA, t, -r);
    for (int slot = 0; slot < 5; ++slot) {
      for (Axis axis : {Axis::Q, Axis::P}) {
        CHECK(std::abs(back.form(ModeLabel::target(1), axis).coeff_at(slot, axis) -
                       reg.form(ModeLabel::target(1), axis).coeff_at(slot, axis)) <
              1e-14);
      }
    }
  }
}

TEST_CASE("non-unitary splitter coefficients are rejected") {
  const ModeRegister reg(2);
  CHECK_THROWS_AS(
      apply_beamsplitter(reg, ModeLabel::target(1), kA, 0.9, 0.9),
      std::invalid_argument);
  CHECK_THROWS_AS(
      apply_beamsplitter(reg, ModeLabel::target(1), ModeLabel::target(1), 1.0, 0.0),
      std::invalid_argument);
}

TEST_CASE("feedforward adds the measured form and cancels with opposite gains") {
  std::mt19937_64 rng(53);
  const LinearForm measured = random_form(3, rng);
  ModeRegister reg(3);
  reg = apply_beamsplitter(reg, ModeLabel::target(1), kA, 0.8, -0.6);

  const ModeRegister zero =
      apply_feedforward(reg, ModeLabel::target(2), Axis::Q, 0.0, measured);
  CHECK(max_coeff_distance(zero.form(ModeLabel::target(2), Axis::Q),
                           reg.form(ModeLabel::target(2), Axis::Q)) == 0.0);

  const ModeRegister forward =
      apply_feedforward(reg, ModeLabel::target(2), Axis::Q, 0.7, measured);
  CHECK(forward.form(ModeLabel::target(2), Axis::Q).coeff(kB, Axis::Q) ==
        doctest::Approx(0.7 * measured.coeff(kB, Axis::Q)));

  const ModeRegister back =
      apply_feedforward(forward, ModeLabel::target(2), Axis::Q, -0.7, measured);
  CHECK(max_coeff_distance(back.form(ModeLabel::target(2), Axis::Q),
                           reg.form(ModeLabel::target(2), Axis::Q)) < 1e-15);
}
