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

#include "qdimred/nn.hpp"

#include <algorithm>
#include <cmath>

#include "qdimred/error.hpp"
#include "qdimred/optim.hpp"
#include "qdimred/rng.hpp"

namespace qdr {
namespace {

constexpr double kClamp = 1e-7;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int fan_in(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::Dense: return s.in;
    case LayerKind::Conv1D: return s.in * s.kernel;
    default: return 0;
  }
}

}  // namespace

std::size_t layer_param_count(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::Dense:
      return static_cast<std::size_t>(s.in) * s.out + s.out;
    case LayerKind::Conv1D:
      return static_cast<std::size_t>(s.out) * (static_cast<std::size_t>(s.in) * s.kernel + 1);
    default:
      return 0;
  }
}

std::string to_string(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::Dense:
      return "Dense(" + std::to_string(s.in) + "," + std::to_string(s.out) + ")";
    case LayerKind::Conv1D:
      return "Conv1D(" + std::to_string(s.in) + "," + std::to_string(s.out) + "," +
             std::to_string(s.kernel) + ")";
    case LayerKind::MaxPool1D: return "MaxPool1D(" + std::to_string(s.kernel) + ")";
    case LayerKind::ReLU: return "ReLU";
    case LayerKind::Sigmoid: return "Sigmoid";
    case LayerKind::Flatten: return "Flatten";
  }
  return "?";
}

double loss_value(LossKind kind, std::span<const double> output, std::span<const double> target) {
  if (output.size() != target.size() || output.empty()) {
    throw DimensionError("loss: output and target lengths differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < output.size(); ++i) {
    if (kind == LossKind::MSE) {
      const double d = output[i] - target[i];
      total += d * d;
    } else {
      const double p = std::clamp(output[i], kClamp, 1.0 - kClamp);
      total -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
    }
  }
  return total / static_cast<double>(output.size());
}

Network::Network(std::vector<LayerSpec> layers, int input_length, int input_channels)
    : layers_(std::move(layers)), in_length_(input_length), in_channels_(input_channels) {
  if (input_length < 1 || input_channels < 1) throw DimensionError("network input is empty");
  Shape shape{input_channels, input_length};
  std::size_t offset = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& s = layers_[i];
    shapes_.push_back(shape);
    offsets_.push_back(offset);
    const std::string where = "layer " + std::to_string(i) + " " + to_string(s);
    switch (s.kind) {
      case LayerKind::Dense:
        if (s.in < 1 || s.out < 1) throw ConfigError(where + ": sizes must be positive");
        if (shape.channels != 1 || shape.length != s.in) {
          throw DimensionError(where + ": expects " + std::to_string(s.in) + " flat inputs");
        }
        shape = {1, s.out};
        break;
      case LayerKind::Conv1D:
        if (s.in < 1 || s.out < 1 || s.kernel < 1) {
          throw ConfigError(where + ": sizes must be positive");
        }
        if (shape.channels != s.in) throw DimensionError(where + ": channel mismatch");
        if (shape.length < s.kernel) throw DimensionError(where + ": input shorter than kernel");
        shape = {s.out, shape.length - s.kernel + 1};
        break;
      case LayerKind::MaxPool1D:
        if (s.kernel < 1) throw ConfigError(where + ": width must be positive");
        if (shape.length < s.kernel) throw DimensionError(where + ": input shorter than window");
        shape = {shape.channels, shape.length / s.kernel};
        break;
      case LayerKind::Flatten:
        shape = {1, shape.channels * shape.length};
        break;
      case LayerKind::ReLU:
      case LayerKind::Sigmoid:
        break;
    }
    offset += layer_param_count(s);
  }
  shapes_.push_back(shape);
  params_.assign(offset, 0.0);
}

int Network::output_size() const { return shapes_.back().channels * shapes_.back().length; }

void Network::init(std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::size_t count = layer_param_count(layers_[i]);
    if (count == 0) continue;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in(layers_[i])));
    for (std::size_t k = 0; k < count; ++k) params_[offsets_[i] + k] = rng.uniform(-bound, bound);
  }
  cached_full_ = false;
}

std::vector<double> Network::run(std::span<const double> input, int n_layers,
                                 std::vector<std::vector<double>>* cache) const {
  if (input.size() != static_cast<std::size_t>(input_size())) {
    throw DimensionError("network expects " + std::to_string(input_size()) + " inputs, got " +
                         std::to_string(input.size()));
  }
  const std::size_t n =
      n_layers < 0 ? layers_.size() : std::min(layers_.size(), static_cast<std::size_t>(n_layers));
  std::vector<double> x(input.begin(), input.end());
  if (cache) cache->assign(1, x);
  for (std::size_t i = 0; i < n; ++i) {
    const LayerSpec& s = layers_[i];
    const Shape in = shapes_[i];
    const Shape out = shapes_[i + 1];
    const double* w = params_.data() + offsets_[i];
    std::vector<double> y;
    switch (s.kind) {
      case LayerKind::Dense: {
        y.assign(static_cast<std::size_t>(s.out), 0.0);
        const double* b = w + static_cast<std::size_t>(s.in) * s.out;
        for (int o = 0; o < s.out; ++o) {
          double acc = b[o];
          const double* row = w + static_cast<std::size_t>(o) * s.in;
          for (int k = 0; k < s.in; ++k) acc += row[k] * x[static_cast<std::size_t>(k)];
          y[static_cast<std::size_t>(o)] = acc;
        }
        break;
      }
      case LayerKind::Conv1D: {
        y.assign(static_cast<std::size_t>(out.channels) * out.length, 0.0);
        const double* b = w + static_cast<std::size_t>(s.out) * s.in * s.kernel;
        for (int oc = 0; oc < s.out; ++oc) {
          for (int t = 0; t < out.length; ++t) {
            double acc = b[oc];
            for (int ic = 0; ic < s.in; ++ic) {
              const double* wk = w + (static_cast<std::size_t>(oc) * s.in + ic) * s.kernel;
              const double* xs = x.data() + static_cast<std::size_t>(ic) * in.length + t;
              for (int k = 0; k < s.kernel; ++k) acc += wk[k] * xs[k];
            }
            y[static_cast<std::size_t>(oc) * out.length + t] = acc;
          }
        }
        break;
      }
      case LayerKind::MaxPool1D: {
        y.assign(static_cast<std::size_t>(out.channels) * out.length, 0.0);
        for (int c = 0; c < out.channels; ++c) {
          for (int t = 0; t < out.length; ++t) {
            const double* xs = x.data() + static_cast<std::size_t>(c) * in.length + t * s.kernel;
            y[static_cast<std::size_t>(c) * out.length + t] = *std::max_element(xs, xs + s.kernel);
          }
        }
        break;
      }
      case LayerKind::ReLU:
        y = x;
        for (double& v : y) v = v > 0.0 ? v : 0.0;
        break;
      case LayerKind::Sigmoid:
        y = x;
        for (double& v : y) v = sigmoid(v);
        break;
      case LayerKind::Flatten:
        y = x;
        break;
    }
    x = std::move(y);
    if (cache) cache->push_back(x);
  }
  return x;
}

std::vector<double> Network::forward(std::span<const double> input, int n_layers) {
  auto out = run(input, n_layers, &cache_);
  cached_full_ = cache_.size() == layers_.size() + 1;
  return out;
}

std::vector<double> Network::predict(std::span<const double> input, int n_layers) const {
  return run(input, n_layers, nullptr);
}

double Network::backward(LossKind loss, std::span<const double> target, std::span<double> grad) {
  if (!cached_full_) throw UsageError("backward called without a cached full forward pass");
  if (grad.size() != params_.size()) throw DimensionError("gradient buffer has the wrong length");
  const std::vector<double>& output = cache_.back();
  const double value = loss_value(loss, output, target);

  const double inv_n = 1.0 / static_cast<double>(output.size());
  std::vector<double> dy(output.size());
  for (std::size_t i = 0; i < output.size(); ++i) {
    if (loss == LossKind::MSE) {
      dy[i] = 2.0 * (output[i] - target[i]) * inv_n;
    } else {
      const double p = output[i];
      dy[i] = (p < kClamp || p > 1.0 - kClamp) ? 0.0
                                               : (p - target[i]) / (p * (1.0 - p)) * inv_n;
    }
  }

  for (std::size_t i = layers_.size(); i-- > 0;) {
    const LayerSpec& s = layers_[i];
    const Shape in = shapes_[i];
    const Shape out = shapes_[i + 1];
    const std::vector<double>& x = cache_[i];
    const std::vector<double>& y = cache_[i + 1];
    const double* w = params_.data() + offsets_[i];
    double* g = grad.data() + offsets_[i];
    std::vector<double> dx(x.size(), 0.0);
    switch (s.kind) {
      case LayerKind::Dense: {
        double* gb = g + static_cast<std::size_t>(s.in) * s.out;
        for (int o = 0; o < s.out; ++o) {
          const double d = dy[static_cast<std::size_t>(o)];
          gb[o] += d;
          const double* row = w + static_cast<std::size_t>(o) * s.in;
          double* grow = g + static_cast<std::size_t>(o) * s.in;
          for (int k = 0; k < s.in; ++k) {
            grow[k] += d * x[static_cast<std::size_t>(k)];
            dx[static_cast<std::size_t>(k)] += row[k] * d;
          }
        }
        break;
      }
      case LayerKind::Conv1D: {
        double* gb = g + static_cast<std::size_t>(s.out) * s.in * s.kernel;
        for (int oc = 0; oc < s.out; ++oc) {
          for (int t = 0; t < out.length; ++t) {
            const double d = dy[static_cast<std::size_t>(oc) * out.length + t];
            gb[oc] += d;
            for (int ic = 0; ic < s.in; ++ic) {
              const std::size_t wo = (static_cast<std::size_t>(oc) * s.in + ic) * s.kernel;
              const std::size_t xo = static_cast<std::size_t>(ic) * in.length + t;
              for (int k = 0; k < s.kernel; ++k) {
                g[wo + k] += d * x[xo + k];
                dx[xo + k] += w[wo + k] * d;
              }
            }
          }
        }
        break;
      }
      case LayerKind::MaxPool1D: {
        for (int c = 0; c < out.channels; ++c) {
          for (int t = 0; t < out.length; ++t) {
            const std::size_t base = static_cast<std::size_t>(c) * in.length + t * s.kernel;
            const auto first = x.begin() + static_cast<std::ptrdiff_t>(base);
            const auto arg = static_cast<std::size_t>(
                std::max_element(first, first + s.kernel) - x.begin());
            dx[arg] += dy[static_cast<std::size_t>(c) * out.length + t];
          }
        }
        break;
      }
      case LayerKind::ReLU:
        for (std::size_t k = 0; k < x.size(); ++k) dx[k] = x[k] > 0.0 ? dy[k] : 0.0;
        break;
      case LayerKind::Sigmoid:
        for (std::size_t k = 0; k < x.size(); ++k) dx[k] = dy[k] * y[k] * (1.0 - y[k]);
        break;
      case LayerKind::Flatten:
        dx = dy;
        break;
    }
    dy = std::move(dx);
  }
  return value;
}

std::vector<double> train_network(Network& net, const Matrix& X, const Matrix& T, LossKind loss,
                                  const NnTrainSettings& settings) {
  if (X.rows() != T.rows() || X.rows() == 0) {
    throw UsageError("training needs equal, nonzero input and target row counts");
  }
  if (settings.epochs < 0 || settings.batch_size < 1 || !(settings.learning_rate > 0.0)) {
    throw ConfigError("invalid network training settings");
  }
  Rng rng(settings.seed);
  Adam adam(net.param_count(), {settings.learning_rate});
  std::vector<double> grad(net.param_count());
  std::vector<double> history;
  const auto n = static_cast<std::size_t>(X.rows());
  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    const auto order = rng.permutation(n);
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(settings.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(settings.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const auto r = static_cast<Eigen::Index>(order[k]);
        net.forward(row_span(X, r));
        total += net.backward(loss, row_span(T, r), grad);
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (double& v : grad) v *= scale;
      adam.step(net.params(), grad);
    }
    history.push_back(total / static_cast<double>(n));
  }
  return history;
}

Network make_cnn_baseline(int n_features, std::uint64_t seed) {
  if (n_features < 6) {
    throw DimensionError("the CNN baseline needs at least 6 features, got " +
                         std::to_string(n_features));
  }
  const int pooled = (n_features - 4) / 2;
  Network net({LayerSpec::conv1d(1, 16, 3), LayerSpec::relu(), LayerSpec::conv1d(16, 32, 3),
               LayerSpec::relu(), LayerSpec::maxpool1d(2), LayerSpec::flatten(),
               LayerSpec::dense(32 * pooled, 1), LayerSpec::sigmoid()},
              n_features);
  net.init(seed);
  return net;
}

std::vector<int> train_cnn_baseline(const Matrix& X_train, std::span<const int> y_train,
                                    const Matrix& X_test, const CnnSettings& settings) {
  if (static_cast<std::size_t>(X_train.rows()) != y_train.size()) {
    throw UsageError("CNN training rows and labels differ in count");
  }
  if (X_test.cols() != X_train.cols()) throw DimensionError("CNN train/test feature mismatch");
  Network net = make_cnn_baseline(static_cast<int>(X_train.cols()), settings.seed);
  Matrix T(X_train.rows(), 1);
  for (Eigen::Index i = 0; i < X_train.rows(); ++i) {
    const int label = y_train[static_cast<std::size_t>(i)];
    if (label != 0 && label != 1) throw UsageError("CNN labels must be 0 or 1");
    T(i, 0) = label;
  }
  train_network(net, X_train, T, LossKind::BCE,
                {settings.epochs, settings.batch_size, settings.learning_rate,
                 settings.seed ^ 0x5851f42d4c957f2dULL});
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(X_test.rows()));
  for (Eigen::Index i = 0; i < X_test.rows(); ++i) {
    out.push_back(net.predict(row_span(X_test, i))[0] >= 0.5 ? 1 : 0);
  }
  return out;
}

}  // namespace qdr
