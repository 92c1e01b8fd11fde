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

#include <vector>

#include "cvqnd/linear_form.hpp"
#include "cvqnd/modes.hpp"

namespace cvqnd {

/// Heisenberg-picture register: each mode carries one LinearForm per
/// quadrature, all expressed over the fixed input basis. A fresh register is
/// the identity (every form is its own basis element). Updates return new
/// registers; beam-splitter updates preserve all canonical brackets.
class ModeRegister {
 public:
  ModeRegister() : ModeRegister(1) {}
  explicit ModeRegister(int n_targets);

  int n_targets() const { return n_targets_; }
  const LinearForm& form(ModeLabel mode, Axis axis) const;

  friend ModeRegister apply_beamsplitter(const ModeRegister& reg, ModeLabel x,
                                         ModeLabel y, double t, double r);
  friend ModeRegister apply_feedforward(const ModeRegister& reg,
                                        ModeLabel target, Axis axis,
                                        double gain, const LinearForm& measured);

 private:
  LinearForm& at(ModeLabel mode, Axis axis);

  int n_targets_;
  std::vector<LinearForm> forms_;  // 2 per slot, interleaved (q, p)
};

/// X_x <- t X_x + r X_y, X_y <- t X_y - r X_x, applied to both quadratures.
/// Requires t^2 + r^2 = 1 within 1e-12 (signed r allowed) and x != y.
ModeRegister apply_beamsplitter(const ModeRegister& reg, ModeLabel x,
                                ModeLabel y, double t, double r);

/// Adds gain * measured to the target form on the given axis. Validity of the
/// substitution (the measured form must be classical data by the time the
/// modulation runs) is the caller's contract.
ModeRegister apply_feedforward(const ModeRegister& reg, ModeLabel target,
                               Axis axis, double gain,
                               const LinearForm& measured);

/// Largest deviation of any intra-mode bracket from kQuadCommutator or any
/// inter-mode bracket from zero.
double max_symplectic_defect(const ModeRegister& reg);

}  // namespace cvqnd
