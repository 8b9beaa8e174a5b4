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
#include <vector>

#include "qdimred/linalg.hpp"

namespace qdr {

enum class KernelSource { Precomputed, Rbf };

struct SvcSettings {
  double C = 1.0;
  double tol = 1e-3;       // KKT tolerance on y_i f(x_i)
  int max_passes = 10000;  // outer SMO sweeps
};

struct SvcModel {
  std::vector<double> alphas;  // one per training sample, 0 <= a <= C
  double bias = 0.0;
  std::vector<std::size_t> support;  // indices with a > 0
  double C = 1.0;
  KernelSource source = KernelSource::Precomputed;
  double gamma = 0.0;              // Rbf only
  std::vector<int> labels;         // training labels in {-1, +1}
  Matrix train_features;           // Rbf only
  double dual_objective = 0.0;     // sum a - 1/2 sum a_i a_j y_i y_j K_ij
  int passes = 0;
  bool converged = true;
};

// exp(-gamma |a_i - b_j|^2) for every row pair.
Matrix rbf_kernel(const Matrix& A, const Matrix& B, double gamma);
// 1 / (n_features * var(X)) with the variance taken over all entries.
double rbf_gamma_scale(const Matrix& X);

// SMO on a precomputed Gram matrix. Throws ConvergenceError when max_passes
// is exhausted; fit_precomputed_partial returns the partial model instead.
SvcModel fit_precomputed(const Matrix& K, std::span<const int> y, const SvcSettings& settings = {});
SvcModel fit_precomputed_partial(const Matrix& K, std::span<const int> y,
                                 const SvcSettings& settings = {});
SvcModel fit_rbf(const Matrix& X, std::span<const int> y, double gamma,
                 const SvcSettings& settings = {});

// sum_i a_i y_i k_i + b, where k_row holds the kernel against every training
// sample.
double decision_value(const SvcModel& model, std::span<const double> k_row);
double decision_value_features(const SvcModel& model, std::span<const double> x);
// Sign of the decision value; exactly zero maps to +1.
int predict(const SvcModel& model, std::span<const double> k_row);
int predict_features(const SvcModel& model, std::span<const double> x);

double dual_objective(const Matrix& K, std::span<const int> y, std::span<const double> alphas);

}  // namespace qdr
