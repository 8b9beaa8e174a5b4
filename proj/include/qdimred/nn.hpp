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
#include <string>
#include <vector>

#include "qdimred/linalg.hpp"

namespace qdr {

enum class LayerKind { Dense, Conv1D, MaxPool1D, ReLU, Sigmoid, Flatten };

// Activations flow as (channels, length) tensors stored channel-major. Dense
// reads a single-channel tensor; Flatten turns (c, l) into (1, c * l).
struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  int in = 0;      // Dense: input features. Conv1D: input channels.
  int out = 0;     // Dense: output features. Conv1D: output channels.
  int kernel = 0;  // Conv1D kernel width, MaxPool1D window width.

  static LayerSpec dense(int in, int out) { return {LayerKind::Dense, in, out, 0}; }
  static LayerSpec conv1d(int in_ch, int out_ch, int k) {
    return {LayerKind::Conv1D, in_ch, out_ch, k};
  }
  static LayerSpec maxpool1d(int width) { return {LayerKind::MaxPool1D, 0, 0, width}; }
  static LayerSpec relu() { return {LayerKind::ReLU, 0, 0, 0}; }
  static LayerSpec sigmoid() { return {LayerKind::Sigmoid, 0, 0, 0}; }
  static LayerSpec flatten() { return {LayerKind::Flatten, 0, 0, 0}; }
};

std::size_t layer_param_count(const LayerSpec& spec);
std::string to_string(const LayerSpec& spec);

enum class LossKind { MSE, BCE };

// MSE: mean squared error over outputs. BCE: mean binary cross-entropy with
// outputs clamped to [1e-7, 1 - 1e-7].
double loss_value(LossKind kind, std::span<const double> output, std::span<const double> target);

class Network {
 public:
  // Validates the shape chain for an input of the given channels x length.
  Network(std::vector<LayerSpec> layers, int input_length, int input_channels = 1);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  int input_size() const { return in_channels_ * in_length_; }
  int output_size() const;

  // Uniform on +-1/sqrt(fan_in) for weights and biases of each layer.
  void init(std::uint64_t seed);

  // Runs the first n_layers layers (all when negative) and caches the
  // activations for backward().
  std::vector<double> forward(std::span<const double> input, int n_layers = -1);
  // Same result without touching the cache.
  std::vector<double> predict(std::span<const double> input, int n_layers = -1) const;

  // d loss / d params for the cached forward (which must span all layers),
  // accumulated into grad. Returns the loss.
  double backward(LossKind loss, std::span<const double> target, std::span<double> grad);

 private:
  struct Shape {
    int channels;
    int length;
  };
  std::vector<double> run(std::span<const double> input, int n_layers,
                          std::vector<std::vector<double>>* cache) const;

  std::vector<LayerSpec> layers_;
  std::vector<Shape> shapes_;  // shapes_[i] is the input shape of layer i
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
  int in_length_;
  int in_channels_;
  std::vector<std::vector<double>> cache_;  // cache_[i] = input of layer i
  bool cached_full_ = false;
};

struct NnTrainSettings {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

// Minibatch Adam on the mean per-sample loss. Rows of X are inputs, rows of
// T targets. Returns the mean training loss of each epoch.
std::vector<double> train_network(Network& net, const Matrix& X, const Matrix& T, LossKind loss,
                                  const NnTrainSettings& settings);

// Conv1D(1->16,k3) ReLU Conv1D(16->32,k3) ReLU MaxPool1D(2) Flatten
// Dense(32 * (n-4) / 2 -> 1) Sigmoid. 1825 parameters at 16 features.
Network make_cnn_baseline(int n_features, std::uint64_t seed);

struct CnnSettings {
  int epochs = 60;
  int batch_size = 16;
  double learning_rate = 0.005;
  std::uint64_t seed = 0;
};

// Trains the baseline on (X_train, y_train in {0,1}) and returns thresholded
// test predictions.
std::vector<int> train_cnn_baseline(const Matrix& X_train, std::span<const int> y_train,
                                    const Matrix& X_test, const CnnSettings& settings);

}  // namespace qdr
