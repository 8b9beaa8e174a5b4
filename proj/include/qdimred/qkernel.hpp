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

#include <cstdint>
#include <span>
#include <vector>

#include "qdimred/embedding.hpp"
#include "qdimred/linalg.hpp"
#include "qdimred/statevector.hpp"

namespace qdr {

// Each layer applies RY(theta) on every wire, a CNOT ring (one CNOT for two
// wires, none for one), then the angle data encoding. Untrainable kernels
// keep the structure with every theta fixed at zero.
struct KernelConfig {
  int n_qubits = 8;
  int layers = 2;
  EmbeddingSpec embedding{EmbeddingKind::AngleY, 2};
  bool trainable = true;
};

void validate(const KernelConfig& config);
std::size_t param_count(const KernelConfig& config);  // layers * n_qubits

struct KernelParams {
  std::vector<double> values;
};

// Trainable: uniform on [0, 2 pi) from seed. Untrainable: zeros.
KernelParams init_params(const KernelConfig& config, std::uint64_t seed);

std::vector<Gate> kernel_gates(const KernelConfig& config, std::span<const double> params,
                               std::span<const double> x);
StateVector kernel_state(const KernelConfig& config, std::span<const double> params,
                         std::span<const double> x);

// |<phi(xi)|phi(xj)>|^2
double kernel_entry(const KernelConfig& config, std::span<const double> params,
                    std::span<const double> xi, std::span<const double> xj);

// Symmetric Gram matrix of the rows of X.
Matrix gram(const KernelConfig& config, std::span<const double> params, const Matrix& X);
// Kernel between every row of A (rows) and every row of B (columns).
Matrix cross_gram(const KernelConfig& config, std::span<const double> params, const Matrix& A,
                  const Matrix& B);

// <K, yy'>_F / (|K|_F |yy'|_F) with y in {-1, +1}.
double target_alignment(const Matrix& K, std::span<const int> y);

// sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
double svc_loss(const Matrix& K, std::span<const int> y, std::span<const double> alphas);

struct KernelTrainSettings {
  int iterations = 30;
  int batch_size = 8;  // rows drawn per iteration
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

struct KernelTrainResult {
  KernelParams params;
  std::vector<double> alignment_history;  // batch alignment before each step
  double initial_alignment = 0.0;         // on all training rows
  double final_alignment = 0.0;
};

// Maximizes target alignment with Adam. Gradients come from the two-term
// shift rule applied separately to the bra and the ket of each Gram entry.
KernelTrainResult train_kernel(const KernelConfig& config, const KernelParams& init,
                               const Matrix& X, std::span<const int> y,
                               const KernelTrainSettings& settings);

}  // namespace qdr
