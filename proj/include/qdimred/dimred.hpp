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
#include <string_view>
#include <vector>

#include "qdimred/linalg.hpp"
#include "qdimred/nn.hpp"

namespace qdr {

enum class ReductionMethod { PCA, TruncatedSVD, TSNE, Autoencoder };

std::string_view to_string(ReductionMethod method);
// Accepts "pca", "tsvd", "tsne", "autoencoder".
ReductionMethod parse_reduction_method(std::string_view name);

struct TsneSettings {
  double perplexity = 30.0;
  int iterations = 1000;
  int exaggeration_iterations = 250;
  double exaggeration = 12.0;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;  // from exaggeration_iterations on
  int neighbors = 5;            // out-of-sample extension
};

struct AutoencoderSettings {
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 0.005;
  bool linear = false;  // drop the ReLUs (ablation)
};

struct ReductionSpec {
  ReductionMethod method = ReductionMethod::PCA;
  int target_dim = 8;
  TsneSettings tsne;
  AutoencoderSettings autoencoder;
  std::uint64_t seed = 0;
};

struct ReducedDataset {
  Matrix train;
  Matrix test;
  bool fitted_on_train = true;
};

struct PcaModel {
  Vector mean;
  Matrix components;  // feature count x d, orthonormal columns
  Vector eigenvalues;  // top d covariance eigenvalues, descending
};

// Top-d eigenvectors of the sample covariance (n - 1 denominator).
PcaModel fit_pca(const Matrix& X, int d);
Matrix transform(const PcaModel& model, const Matrix& X);
ReducedDataset pca_fit_transform(const Matrix& train, const Matrix& test, int d);

struct TsvdModel {
  Matrix components;       // feature count x d right singular vectors
  Vector singular_values;  // top d, descending
};

// No centering: train maps to U_d Sigma_d = X V_d.
TsvdModel fit_tsvd(const Matrix& X, int d);
Matrix transform(const TsvdModel& model, const Matrix& X);
ReducedDataset tsvd_fit_transform(const Matrix& train, const Matrix& test, int d);

// Largest perplexity accepted for n rows, exclusive.
double max_perplexity(Eigen::Index n_rows);

// Row-conditional Gaussian affinities matched to the perplexity, symmetrized
// and normalized to sum to 1.
Matrix tsne_affinities(const Matrix& X, double perplexity);

struct TsneResult {
  Matrix embedding;
  std::vector<double> kl_history;  // KL(P || Q) after each iteration, unexaggerated P
};

// Exact t-SNE. Throws ConfigError when perplexity >= max_perplexity(rows).
TsneResult tsne_embed(const Matrix& X, int d, const TsneSettings& settings, std::uint64_t seed);
// Each row of Q is placed at the inverse-distance weighted mean of the
// embeddings of its k nearest rows of X (a row equal to a training row takes
// that row's embedding).
Matrix tsne_extend(const Matrix& X, const Matrix& embedding, const Matrix& Q, int k);
ReducedDataset tsne_fit_transform(const Matrix& train, const Matrix& test, int d,
                                  const TsneSettings& settings, std::uint64_t seed);

struct AutoencoderModel {
  Network net;  // encoder then decoder
  int encoder_layers = 0;
  int code_dim = 0;
};

// m -> h -> d -> h -> m with h = max(d, ceil(m / 2)), ReLU after each
// hidden h layer, linear code and output.
AutoencoderModel make_autoencoder(int n_features, int d, bool linear, std::uint64_t seed);
// Trains on X with MSE; returns per-epoch loss.
std::vector<double> train_autoencoder(AutoencoderModel& model, const Matrix& X,
                                      const AutoencoderSettings& settings, std::uint64_t seed);
Matrix encode(const AutoencoderModel& model, const Matrix& X);
Matrix reconstruct(const AutoencoderModel& model, const Matrix& X);
double reconstruction_mse(const AutoencoderModel& model, const Matrix& X);
ReducedDataset autoencoder_fit_transform(const Matrix& train, const Matrix& test, int d,
                                         const AutoencoderSettings& settings, std::uint64_t seed);

// Dispatch on spec.method. t-SNE perplexity is lowered to fit the train
// size when needed.
ReducedDataset reduce(const ReductionSpec& spec, const Matrix& train, const Matrix& test);

}  // namespace qdr
