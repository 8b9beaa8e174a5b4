// Copyright 2026 The qdimred Authors
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

#include <span>
#include <string_view>
#include <vector>

#include "qdimred/statevector.hpp"

namespace qdr {

// Two-qubit building blocks for the QNN circuits. Parameter counts are fixed
// per kind: U_TTN 2, U_9 2, U_13 6, U_14 6, U_SO4 6, U_5 10, U_6 10,
// U_SU4 15, Pooling 2.
enum class AnsatzKind { U_TTN, U_9, U_13, U_14, U_SO4, U_5, U_6, U_SU4, Pooling };

inline constexpr AnsatzKind kAllAnsatzKinds[] = {
    AnsatzKind::U_TTN, AnsatzKind::U_9,  AnsatzKind::U_13,  AnsatzKind::U_14,   AnsatzKind::U_SO4,
    AnsatzKind::U_5,   AnsatzKind::U_6,  AnsatzKind::U_SU4, AnsatzKind::Pooling};

int ansatz_param_count(AnsatzKind kind);
std::string_view to_string(AnsatzKind kind);
// Case-sensitive names as printed by to_string ("U_SU4", "Pooling", ...).
AnsatzKind parse_ansatz_kind(std::string_view name);

// One gate of a block template. Wires are local (0 = first block wire,
// 1 = second). slots index into the block's parameter array; -1 = unused.
struct TemplateGate {
  GateKind kind;
  int w0;
  int w1;
  std::array<int, 3> slots;
};

const std::vector<TemplateGate>& block_template(AnsatzKind kind);

// Concrete gates for a block on wires (a, b).
std::vector<Gate> block_gates(AnsatzKind kind, std::span<const double> params, int a, int b);

// Applies the block in place; throws GateError on parameter arity mismatch.
void apply_block(StateVector& state, AnsatzKind kind, std::span<const double> params,
                 int a, int b);

}  // namespace qdr
