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
#include <string_view>
#include <utility>
#include <vector>

#include "qdimred/ansatz.hpp"
#include "qdimred/embedding.hpp"
#include "qdimred/linalg.hpp"
#include "qdimred/statevector.hpp"

namespace qdr {

// Ladder: (0,1),(2,3),... then (1,2),(3,4),...,(n-1,0).
// OneD:   as Ladder without the wrap-around pair.
enum class Wiring { Ladder, OneD };

std::string_view to_string(Wiring w);
Wiring parse_wiring(std::string_view name);

struct QnnConfig {
  int n_qubits = 8;
  AnsatzKind ansatz = AnsatzKind::U_SU4;
  int layers = 2;
  bool pooling = true;
  EmbeddingSpec embedding{EmbeddingKind::Amplitude, 2};
  Wiring wiring = Wiring::Ladder;
};

void validate(const QnnConfig& config);

// Wire pairs touched by one convolution layer, in application order.
std::vector<std::pair<int, int>> layer_pairs(int n_qubits, Wiring wiring);

// Pooling stages as (control, survivor) pairs. Power-of-two widths pool down
// to qubit 0; other widths get a single stage.
std::vector<std::vector<std::pair<int, int>>> pooling_stages(int n_qubits);

std::size_t param_count(const QnnConfig& config);

struct QnnParams {
  std::vector<double> values;
};

// Uniform on [0, 2 pi) from seed.
QnnParams init_params(const QnnConfig& config, std::uint64_t seed);

// A primitive gate of the trainable part with the index of the parameter that
// drives it (-1 for fixed gates). U3 gates are expanded into RZ RY RZ so every
// parameter drives exactly one rotation.
struct BoundOp {
  Gate gate;
  int param = -1;
};

// One two-qubit block placed on wires (a, b). Gate wires are local: 0 is a,
// 1 is b.
struct BoundBlock {
  int a = 0;
  int b = 1;
  std::vector<BoundOp> gates;
};

// The parameterized part of the circuit (convolution layers + pooling),
// compiled once per config. Each block is simulated as one fused 4x4 pass.
class QnnCircuit {
 public:
  explicit QnnCircuit(const QnnConfig& config);

  const QnnConfig& config() const { return config_; }
  std::size_t num_params() const { return n_params_; }
  const std::vector<BoundBlock>& blocks() const { return blocks_; }
  // Flattened primitive gates on global wires with their parameter indices.
  std::vector<BoundOp> ops() const;

  // Embedding followed by the bound circuit.
  StateVector run(std::span<const double> params, std::span<const double> x) const;
  // P(qubit 0 = 1).
  double forward(std::span<const double> params, std::span<const double> x) const;
  // p1, with weight * dp1/dparams accumulated into grad by adjoint
  // differentiation at block granularity.
  double forward_and_gradient(std::span<const double> params, std::span<const double> x,
                              double weight, std::span<double> grad) const;
  // dp1/dparams by the parameter-shift rule: two terms for single-qubit
  // rotations, four terms for controlled rotations.
  std::vector<double> shift_gradient(std::span<const double> params,
                                     std::span<const double> x) const;

 private:
  void check_params(std::span<const double> params) const;
  std::vector<Matrix4> block_matrices(std::span<const double> params) const;

  QnnConfig config_;
  std::size_t n_params_ = 0;
  std::vector<BoundBlock> blocks_;
};

// build_forward: P(qubit 0 = 1); predicted label is 1 when p1 >= 0.5.
double forward(const QnnConfig& config, const QnnParams& params, std::span<const double> x);

inline constexpr double kProbClamp = 1e-7;

// Mean binary cross-entropy with p1 clamped to [1e-7, 1 - 1e-7].
double bce(double p1, int label);
double loss(const QnnConfig& config, const QnnParams& params, const Matrix& X,
            std::span<const int> y);

enum class GradientMethod { ParameterShift, Adjoint };

std::vector<double> gradient(const QnnConfig& config, const QnnParams& params, const Matrix& X,
                             std::span<const int> y,
                             GradientMethod method = GradientMethod::ParameterShift);

struct TrainSettings {
  int iterations = 200;
  int batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  // Training uses adjoint gradients; they equal the shift-rule values to
  // rounding and cost a constant number of passes instead of one per
  // parameter.
  GradientMethod method = GradientMethod::Adjoint;
};

void validate(const TrainSettings& settings);

struct QnnTrainResult {
  QnnParams params;
  std::vector<double> loss_history;  // minibatch loss before each step
};

QnnTrainResult train(const QnnConfig& config, const TrainSettings& settings, const Matrix& X,
                     std::span<const int> y);

std::vector<int> predict(const QnnConfig& config, const QnnParams& params, const Matrix& X);

}  // namespace qdr
