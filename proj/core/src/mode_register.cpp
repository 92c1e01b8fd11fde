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

#include "cvqnd/mode_register.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqnd {

namespace {

ModeLabel slot_label(int slot, int n_targets) {
  if (slot < n_targets) return ModeLabel::target(slot + 1);
  return slot == n_targets ? ModeLabel::ancilla_a() : ModeLabel::ancilla_b();
}

}  // namespace

ModeRegister::ModeRegister(int n_targets) : n_targets_(n_targets) {
  if (n_targets < 1 || n_targets > kMaxTargetModes) {
    throw std::invalid_argument("ModeRegister: target count out of range");
  }
  forms_.reserve(2 * (n_targets + 2));
  for (int slot = 0; slot < n_targets + 2; ++slot) {
    const ModeLabel mode = slot_label(slot, n_targets);
    forms_.push_back(LinearForm::basis(n_targets, mode, Axis::Q));
    forms_.push_back(LinearForm::basis(n_targets, mode, Axis::P));
  }
}

const LinearForm& ModeRegister::form(ModeLabel mode, Axis axis) const {
  const int slot = forms_.front().slot(mode);
  return forms_[2 * slot + static_cast<int>(axis)];
}

LinearForm& ModeRegister::at(ModeLabel mode, Axis axis) {
  const int slot = forms_.front().slot(mode);
  return forms_[2 * slot + static_cast<int>(axis)];
}

ModeRegister apply_beamsplitter(const ModeRegister& reg, ModeLabel x,
                                ModeLabel y, double t, double r) {
  if (x == y) {
    throw std::invalid_argument("apply_beamsplitter: modes must differ");
  }
  if (std::abs(t * t + r * r - 1.0) > 1e-12) {
    throw std::invalid_argument("apply_beamsplitter: t^2 + r^2 != 1");
  }
  ModeRegister out = reg;
  for (Axis axis : {Axis::Q, Axis::P}) {
    const LinearForm old_x = reg.form(x, axis);
    const LinearForm old_y = reg.form(y, axis);
    out.at(x, axis) = lf_combine({{t, old_x}, {r, old_y}});
    out.at(y, axis) = lf_combine({{t, old_y}, {-r, old_x}});
  }
  return out;
}

ModeRegister apply_feedforward(const ModeRegister& reg, ModeLabel target,
                               Axis axis, double gain,
                               const LinearForm& measured) {
  ModeRegister out = reg;
  out.at(target, axis) = lf_combine({{1.0, reg.form(target, axis)}, {gain, measured}});
  return out;
}

double max_symplectic_defect(const ModeRegister& reg) {
  const int n_slots = reg.n_targets() + 2;
  double worst = 0.0;
  for (int a = 0; a < n_slots; ++a) {
    const ModeLabel ma = slot_label(a, reg.n_targets());
    for (int b = a; b < n_slots; ++b) {
      const ModeLabel mb = slot_label(b, reg.n_targets());
      const double qq = bracket(reg.form(ma, Axis::Q), reg.form(mb, Axis::Q));
      const double pp = bracket(reg.form(ma, Axis::P), reg.form(mb, Axis::P));
      const double qp = bracket(reg.form(ma, Axis::Q), reg.form(mb, Axis::P));
      const double expected_qp = (a == b) ? kQuadCommutator : 0.0;
      worst = std::max({worst, std::abs(qq), std::abs(pp),
                        std::abs(qp - expected_qp)});
    }
  }
  return worst;
}

}  // namespace cvqnd
