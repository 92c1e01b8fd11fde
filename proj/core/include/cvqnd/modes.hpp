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

#include <compare>
#include <stdexcept>
#include <string>

namespace cvqnd {

// Quadrature normalization used throughout: [q, p] = 2i and vacuum variance 1.
inline constexpr double kQuadCommutator = 2.0;

// Dense coefficient storage and exhaustive bipartition enumeration stay cheap
// only for small registers; target counts above this are rejected.
inline constexpr int kMaxTargetModes = 32;

enum class Axis : int { Q = 0, P = 1 };

inline Axis conjugate(Axis axis) { return axis == Axis::Q ? Axis::P : Axis::Q; }

// A mode of the interaction register: one of the N target modes (1-based
// index) or one of the two ancillas that sweep across them.
struct ModeLabel {
  enum class Kind : int { Target = 0, AncillaA = 1, AncillaB = 2 };

  Kind kind = Kind::Target;
  int index = 1;  // 1-based target index; 0 for ancillas

  static constexpr ModeLabel target(int j) { return ModeLabel{Kind::Target, j}; }
  static constexpr ModeLabel ancilla_a() { return ModeLabel{Kind::AncillaA, 0}; }
  static constexpr ModeLabel ancilla_b() { return ModeLabel{Kind::AncillaB, 0}; }

  bool is_target() const { return kind == Kind::Target; }

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

inline std::string to_string(const ModeLabel& mode) {
  switch (mode.kind) {
    case ModeLabel::Kind::AncillaA:
      return "A";
    case ModeLabel::Kind::AncillaB:
      return "B";
    default:
      return std::to_string(mode.index);
  }
}

}  // namespace cvqnd
