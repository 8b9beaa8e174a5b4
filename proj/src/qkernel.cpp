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

#include "qdimred/qkernel.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "qdimred/error.hpp"
#include "qdimred/optim.hpp"
#include "qdimred/rng.hpp"

namespace qdr {
namespace {

using ComplexMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

void check_params(const KernelConfig& config, std::span<const double> params) {
  if (params.size() != param_count(config)) {
    throw DimensionError("kernel expects " + std::to_string(param_count(config)) +
                         " parameters, got " + std::to_string(params.size()));
  }
}

// Embedded states of the rows of X as columns.
ComplexMatrix state_columns(const KernelConfig& config, std::span<const double> params,
                            const Matrix& X) {
  const Eigen::Index dim = Eigen::Index{1} << config.n_qubits;
  ComplexMatrix phi(dim, X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const StateVector s = kernel_state(config, params, row_span(X, r));
    const auto amps = s.amplitudes();
    for (Eigen::Index i = 0; i < dim; ++i) phi(i, r) = amps[static_cast<std::size_t>(i)];
  }
  return phi;
}

double overlap2(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

void check_pm_labels(std::span<const int> y) {
  for (int v : y)
    if (v != -1 && v != 1) throw UsageError("kernel labels must be -1 or +1");
}

}  // namespace

void validate(const KernelConfig& config) {
  if (config.n_qubits < 1 || config.n_qubits > 8) {
    throw ConfigError("kernel width must be between 1 and 8 qubits, got " +
                      std::to_string(config.n_qubits));
  }
  if (config.layers < 1) throw ConfigError("kernel needs at least one layer");
  if (!is_angle(config.embedding.kind)) {
    throw ConfigError("kernel data encoding must be an angle embedding, got " +
                      std::string(to_string(config.embedding.kind)));
  }
}

std::size_t param_count(const KernelConfig& config) {
  return static_cast<std::size_t>(config.layers) * static_cast<std::size_t>(config.n_qubits);
}

KernelParams init_params(const KernelConfig& config, std::uint64_t seed) {
  validate(config);
  KernelParams p;
  p.values.assign(param_count(config), 0.0);
  if (!config.trainable) return p;
  Rng rng(seed);
  for (double& v : p.values) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

std::vector<Gate> kernel_gates(const KernelConfig& config, std::span<const double> params,
                               std::span<const double> x) {
  validate(config);
  check_params(config, params);
  validate_embedding(config.embedding, x.size(), config.n_qubits);
  const int n = config.n_qubits;
  const auto data = embedding_gates(x, n, config.embedding);
  std::vector<Gate> gates;
  for (int l = 0; l < config.layers; ++l) {
    for (int w = 0; w < n; ++w) {
      gates.push_back(Gate::ry(w, params[static_cast<std::size_t>(l * n + w)]));
    }
    if (n == 2) {
      gates.push_back(Gate::cnot(0, 1));
    } else if (n >= 3) {
      for (int w = 0; w < n; ++w) gates.push_back(Gate::cnot(w, (w + 1) % n));
    }
    gates.insert(gates.end(), data.begin(), data.end());
  }
  return gates;
}

StateVector kernel_state(const KernelConfig& config, std::span<const double> params,
                         std::span<const double> x) {
  StateVector s = StateVector::zero(config.n_qubits);
  for (const Gate& g : kernel_gates(config, params, x)) s.apply(g);
  return s;
}

double kernel_entry(const KernelConfig& config, std::span<const double> params,
                    std::span<const double> xi, std::span<const double> xj) {
  if (xi.size() != xj.size()) throw DimensionError("kernel inputs differ in length");
  return overlap2(kernel_state(config, params, xi), kernel_state(config, params, xj));
}

Matrix gram(const KernelConfig& config, std::span<const double> params, const Matrix& X) {
  const ComplexMatrix phi = state_columns(config, params, X);
  const ComplexMatrix g = phi.adjoint() * phi;
  Matrix K(X.rows(), X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = i; j < X.rows(); ++j) {
      K(i, j) = std::norm(g(i, j));
      K(j, i) = K(i, j);
    }
  }
  return K;
}

Matrix cross_gram(const KernelConfig& config, std::span<const double> params, const Matrix& A,
                  const Matrix& B) {
  if (A.cols() != B.cols()) throw DimensionError("cross Gram: feature counts differ");
  const ComplexMatrix g =
      state_columns(config, params, A).adjoint() * state_columns(config, params, B);
  return g.cwiseAbs2();
}

double target_alignment(const Matrix& K, std::span<const int> y) {
  if (K.rows() != K.cols() || static_cast<std::size_t>(K.rows()) != y.size()) {
    throw UsageError("alignment: K must be square with one label per row");
  }
  check_pm_labels(y);
  double ky = 0.0;
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    for (Eigen::Index j = 0; j < K.cols(); ++j)
      ky += K(i, j) * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
  const double norm_k = K.norm();
  if (norm_k == 0.0) throw UsageError("alignment of a zero matrix is undefined");
  return ky / (norm_k * static_cast<double>(y.size()));
}

double svc_loss(const Matrix& K, std::span<const int> y, std::span<const double> alphas) {
  if (K.rows() != K.cols() || static_cast<std::size_t>(K.rows()) != y.size() ||
      alphas.size() != y.size()) {
    throw UsageError("svc_loss: K, y and alphas disagree in size");
  }
  const Eigen::Map<const Eigen::VectorXd> a(alphas.data(), static_cast<Eigen::Index>(alphas.size()));
  Eigen::VectorXd ay(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) ay(i) = a(i) * y[static_cast<std::size_t>(i)];
  return a.sum() - 0.5 * ay.dot(K * ay);
}

KernelTrainResult train_kernel(const KernelConfig& config, const KernelParams& init,
                               const Matrix& X, std::span<const int> y,
                               const KernelTrainSettings& settings) {
  validate(config);
  if (!config.trainable) throw UsageError("kernel config is not trainable");
  check_params(config, init.values);
  if (static_cast<std::size_t>(X.rows()) != y.size() || X.rows() < 2) {
    throw UsageError("kernel training needs at least 2 rows with one label each");
  }
  check_pm_labels(y);
  if (settings.iterations < 0 || settings.batch_size < 2 || !(settings.learning_rate > 0.0)) {
    throw ConfigError("invalid kernel training settings");
  }

  KernelTrainResult result;
  result.params = init;
  std::vector<double>& theta = result.params.values;
  result.initial_alignment = target_alignment(gram(config, theta, X), y);

  Rng rng(settings.seed);
  Adam adam(theta.size(), {settings.learning_rate});
  const auto m = static_cast<std::size_t>(X.rows());
  const std::size_t b = std::min(m, static_cast<std::size_t>(settings.batch_size));
  const double half_pi = std::numbers::pi / 2.0;
  std::vector<double> grad(theta.size());
  std::vector<double> shifted;

  for (int it = 0; it < settings.iterations; ++it) {
    auto rows = rng.permutation(m);
    rows.resize(b);
    std::vector<int> yb(b);
    std::vector<StateVector> psi;
    for (std::size_t k = 0; k < b; ++k) {
      yb[k] = y[rows[k]];
      psi.push_back(kernel_state(config, theta, row_span(X, static_cast<Eigen::Index>(rows[k]))));
    }
    Matrix K(b, b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = i; j < b; ++j)
        K(i, j) = K(j, i) = overlap2(psi[i], psi[j]);
    const double norm_k = K.norm();
    double ky = 0.0;
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) ky += K(i, j) * yb[i] * yb[j];
    const double alignment = ky / (norm_k * static_cast<double>(b));
    result.alignment_history.push_back(alignment);

    for (std::size_t p = 0; p < theta.size(); ++p) {
      std::vector<StateVector> plus, minus;
      shifted = theta;
      for (std::size_t k = 0; k < b; ++k) {
        const auto x = row_span(X, static_cast<Eigen::Index>(rows[k]));
        shifted[p] = theta[p] + half_pi;
        plus.push_back(kernel_state(config, shifted, x));
        shifted[p] = theta[p] - half_pi;
        minus.push_back(kernel_state(config, shifted, x));
      }
      double d_ky = 0.0, d_kk = 0.0;
      for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
          if (i == j) continue;  // unit diagonal
          const double dk = 0.5 * (overlap2(plus[i], psi[j]) - overlap2(minus[i], psi[j])) +
                            0.5 * (overlap2(psi[i], plus[j]) - overlap2(psi[i], minus[j]));
          d_ky += dk * yb[i] * yb[j];
          d_kk += dk * K(i, j);
        }
      }
      const double d_align =
          (d_ky / norm_k - ky * d_kk / (norm_k * norm_k * norm_k)) / static_cast<double>(b);
      grad[p] = -d_align;
    }
    adam.step(theta, grad);
  }
  result.final_alignment = target_alignment(gram(config, theta, X), y);
  return result;
}

}  // namespace qdr
