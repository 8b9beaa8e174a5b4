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

#include "qdimred/embedding.hpp"

#include <cmath>
#include <string>

#include "qdimred/error.hpp"

namespace qdr {

std::string_view to_string(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::AngleX: return "angle_x";
    case EmbeddingKind::AngleY: return "angle_y";
    case EmbeddingKind::AngleZ: return "angle_z";
    case EmbeddingKind::Amplitude: return "amplitude";
    case EmbeddingKind::IQP: return "iqp";
  }
  return "?";
}

EmbeddingKind parse_embedding_kind(std::string_view name) {
  for (auto k : {EmbeddingKind::AngleX, EmbeddingKind::AngleY, EmbeddingKind::AngleZ,
                 EmbeddingKind::Amplitude, EmbeddingKind::IQP}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown embedding '" + std::string(name) + "'");
}

bool is_angle(EmbeddingKind kind) {
  return kind == EmbeddingKind::AngleX || kind == EmbeddingKind::AngleY ||
         kind == EmbeddingKind::AngleZ;
}

void validate_embedding(const EmbeddingSpec& spec, std::size_t n_features, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside 1.." +
                      std::to_string(kMaxQubits));
  }
  if (spec.kind == EmbeddingKind::Amplitude) {
    if (n_features == 0 || n_features > (std::size_t{1} << n_qubits)) {
      throw DimensionError("amplitude embedding of " + std::to_string(n_features) +
                           " features needs 1..2^" + std::to_string(n_qubits));
    }
    return;
  }
  if (n_features != static_cast<std::size_t>(n_qubits)) {
    throw DimensionError(std::string(to_string(spec.kind)) + " embedding needs " +
                         std::to_string(n_qubits) + " features, got " +
                         std::to_string(n_features));
  }
  if (spec.kind == EmbeddingKind::IQP && spec.iqp_repeats < 1) {
    throw ConfigError("iqp_repeats must be >= 1");
  }
}

std::vector<Gate> embedding_gates(std::span<const double> x, int n_qubits,
                                  const EmbeddingSpec& spec) {
  validate_embedding(spec, x.size(), n_qubits);
  std::vector<Gate> gates;
  switch (spec.kind) {
    case EmbeddingKind::AngleX:
      for (int i = 0; i < n_qubits; ++i) gates.push_back(Gate::rx(i, x[i]));
      break;
    case EmbeddingKind::AngleY:
      for (int i = 0; i < n_qubits; ++i) gates.push_back(Gate::ry(i, x[i]));
      break;
    case EmbeddingKind::AngleZ:
      for (int i = 0; i < n_qubits; ++i) gates.push_back(Gate::rz(i, x[i]));
      break;
    case EmbeddingKind::IQP:
      for (int r = 0; r < spec.iqp_repeats; ++r) {
        for (int i = 0; i < n_qubits; ++i) gates.push_back(Gate::h(i));
        for (int i = 0; i < n_qubits; ++i) gates.push_back(Gate::rz(i, x[i]));
        // Ring of neighbours; with two wires the ring has a single edge.
        const int edges = n_qubits < 3 ? n_qubits - 1 : n_qubits;
        for (int i = 0; i < edges; ++i) {
          const int j = (i + 1) % n_qubits;
          gates.push_back(Gate::multi_rz(i, j, x[i] * x[j]));
        }
      }
      break;
    case EmbeddingKind::Amplitude:
      throw UsageError("amplitude embedding has no gate form");
  }
  return gates;
}

StateVector embed(std::span<const double> x, int n_qubits, const EmbeddingSpec& spec) {
  validate_embedding(spec, x.size(), n_qubits);
  if (spec.kind == EmbeddingKind::Amplitude) {
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      throw NormalizationError("amplitude embedding of a zero or non-finite vector");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    for (std::size_t i = 0; i < x.size(); ++i) amps[i] = x[i] * inv;
    return StateVector::from_amplitudes(n_qubits, std::move(amps));
  }
  StateVector s = StateVector::zero(n_qubits);
  for (const Gate& g : embedding_gates(x, n_qubits, spec)) s.apply(g);
  return s;
}

}  // namespace qdr
