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

enum class EmbeddingKind { AngleX, AngleY, AngleZ, Amplitude, IQP };

struct EmbeddingSpec {
  EmbeddingKind kind = EmbeddingKind::AngleY;
  int iqp_repeats = 2;  // IQP only
};

std::string_view to_string(EmbeddingKind kind);
// Accepts "angle_x", "angle_y", "angle_z", "amplitude", "iqp".
EmbeddingKind parse_embedding_kind(std::string_view name);
bool is_angle(EmbeddingKind kind);

// Throws DimensionError / ConfigError if x of this length cannot be embedded
// into n_qubits under spec.
void validate_embedding(const EmbeddingSpec& spec, std::size_t n_features, int n_qubits);

// The embedding circuit as gates acting on |0...0>. Amplitude embedding is a
// state preparation, not a gate list, and is rejected here.
std::vector<Gate> embedding_gates(std::span<const double> x, int n_qubits,
                                  const EmbeddingSpec& spec);

// Encode x into a normalized state.
//   Angle*:    R_axis(x_i) on wire i.
//   Amplitude: zero-pad to 2^n, then L2-normalize.
//   IQP:       iqp_repeats x [H on all wires; RZ(x_i) on wire i;
//              MultiRZ(x_i * x_{i+1}) on each ring neighbour pair].
StateVector embed(std::span<const double> x, int n_qubits, const EmbeddingSpec& spec);

}  // namespace qdr
