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

#include "qdimred/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qdimred/error.hpp"
#include "qdimred/rng.hpp"

namespace qdr {
namespace {

void check_target(const Matrix& train, const Matrix& test, int d, Eigen::Index min_rows) {
  if (d < 1 || d > train.cols()) {
    throw DimensionError("target dimension " + std::to_string(d) + " outside 1.." +
                         std::to_string(train.cols()));
  }
  if (train.rows() < min_rows) {
    throw DimensionError("reduction needs at least " + std::to_string(min_rows) + " train rows");
  }
  if (test.size() > 0 && test.cols() != train.cols()) {
    throw DimensionError("train and test feature counts differ");
  }
}

Matrix squared_distances(const Matrix& X) {
  const Eigen::Index n = X.rows();
  Matrix D(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) D(i, j) = D(j, i) = (X.row(i) - X.row(j)).squaredNorm();
  }
  return D;
}

}  // namespace

std::string_view to_string(ReductionMethod method) {
  switch (method) {
    case ReductionMethod::PCA: return "pca";
    case ReductionMethod::TruncatedSVD: return "tsvd";
    case ReductionMethod::TSNE: return "tsne";
    case ReductionMethod::Autoencoder: return "autoencoder";
  }
  return "?";
}

ReductionMethod parse_reduction_method(std::string_view name) {
  if (name == "pca") return ReductionMethod::PCA;
  if (name == "tsvd") return ReductionMethod::TruncatedSVD;
  if (name == "tsne") return ReductionMethod::TSNE;
  if (name == "autoencoder") return ReductionMethod::Autoencoder;
  throw ConfigError("unknown reduction method '" + std::string(name) + "'");
}

PcaModel fit_pca(const Matrix& X, int d) {
  check_target(X, Matrix(), d, 2);
  PcaModel model;
  model.mean = X.colwise().mean().transpose();
  const Matrix centered = X.rowwise() - model.mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / static_cast<double>(X.rows() - 1);
  const SymmetricEigen eig = jacobi_eigen(cov);
  model.components = eig.vectors.leftCols(d);
  fix_column_signs(model.components);
  model.eigenvalues = eig.values.head(d);
  return model;
}

Matrix transform(const PcaModel& model, const Matrix& X) {
  if (X.cols() != model.mean.size()) throw DimensionError("PCA: feature count mismatch");
  return (X.rowwise() - model.mean.transpose()) * model.components;
}

ReducedDataset pca_fit_transform(const Matrix& train, const Matrix& test, int d) {
  check_target(train, test, d, 2);
  const PcaModel model = fit_pca(train, d);
  return {transform(model, train), transform(model, test), true};
}

TsvdModel fit_tsvd(const Matrix& X, int d) {
  check_target(X, Matrix(), d, 1);
  const ThinSvd svd = jacobi_svd(X);
  TsvdModel model;
  model.components = svd.v.leftCols(d);
  fix_column_signs(model.components);
  model.singular_values = svd.singular_values.head(d);
  return model;
}

Matrix transform(const TsvdModel& model, const Matrix& X) {
  if (X.cols() != model.components.rows()) throw DimensionError("TSVD: feature count mismatch");
  return X * model.components;
}

ReducedDataset tsvd_fit_transform(const Matrix& train, const Matrix& test, int d) {
  check_target(train, test, d, 1);
  const TsvdModel model = fit_tsvd(train, d);
  return {transform(model, train), transform(model, test), true};
}

double max_perplexity(Eigen::Index n_rows) { return static_cast<double>(n_rows - 1) / 3.0; }

Matrix tsne_affinities(const Matrix& X, double perplexity) {
  const Eigen::Index n = X.rows();
  if (!(perplexity > 0.0) || perplexity >= max_perplexity(n)) {
    throw ConfigError("perplexity must lie in (0, " + std::to_string(max_perplexity(n)) +
                      ") for " + std::to_string(n) + " rows");
  }
  const Matrix D = squared_distances(X);
  const double target = std::log(perplexity);
  Matrix P = Matrix::Zero(n, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double d_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) d_min = std::min(d_min, D(i, j));
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
      double sum = 0.0, weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double shifted = D(i, j) - d_min;
        const double p = j == i ? 0.0 : std::exp(-beta * shifted);
        row[static_cast<std::size_t>(j)] = p;
        sum += p;
        weighted += p * shifted;
      }
      const double entropy = std::log(sum) + beta * weighted / sum;
      for (double& p : row) p /= sum;
      const double gap = entropy - target;
      if (std::abs(gap) < 1e-5) break;
      if (gap > 0.0) {  // too flat: sharpen
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) P(i, j) = row[static_cast<std::size_t>(j)];
  }
  Matrix sym = (P + P.transpose()) / (2.0 * static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) sym(i, j) = std::max(sym(i, j), 1e-12);
  return sym;
}

TsneResult tsne_embed(const Matrix& X, int d, const TsneSettings& s, std::uint64_t seed) {
  if (d < 1) throw DimensionError("t-SNE target dimension must be >= 1");
  if (s.iterations < 0 || s.exaggeration_iterations < 0 || !(s.learning_rate > 0.0)) {
    throw ConfigError("invalid t-SNE settings");
  }
  const Matrix P = tsne_affinities(X, s.perplexity);
  const Eigen::Index n = X.rows();
  Rng rng(seed);
  Matrix Y(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k) Y(i, k) = 1e-4 * rng.normal();
  Matrix update = Matrix::Zero(n, d);
  Matrix gains = Matrix::Ones(n, d);
  Matrix num(n, n);
  Matrix grad(n, d);

  TsneResult result;
  for (int it = 0; it < s.iterations; ++it) {
    const bool early = it < s.exaggeration_iterations;
    const double exaggeration = early ? s.exaggeration : 1.0;
    const double momentum = early ? s.initial_momentum : s.final_momentum;

    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      num(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = 1.0 / (1.0 + (Y.row(i) - Y.row(j)).squaredNorm());
        num(i, j) = num(j, i) = v;
        z += 2.0 * v;
      }
    }
    double kl = 0.0;
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double q = std::max(num(i, j) / z, 1e-12);
        kl += P(i, j) * std::log(P(i, j) / q);
        const double coeff = 4.0 * (exaggeration * P(i, j) - q) * num(i, j);
        grad.row(i) += coeff * (Y.row(i) - Y.row(j));
      }
    }
    result.kl_history.push_back(kl);

    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const bool same = (grad(i, k) > 0.0) == (update(i, k) > 0.0);
        gains(i, k) = std::max(same ? gains(i, k) * 0.8 : gains(i, k) + 0.2, 0.01);
        update(i, k) = momentum * update(i, k) - s.learning_rate * gains(i, k) * grad(i, k);
        Y(i, k) += update(i, k);
      }
    }
    Y.rowwise() -= Y.colwise().mean();
  }
  result.embedding = Y;
  return result;
}

Matrix tsne_extend(const Matrix& X, const Matrix& embedding, const Matrix& Q, int k) {
  if (X.rows() != embedding.rows()) throw DimensionError("t-SNE extension: row mismatch");
  if (Q.size() > 0 && Q.cols() != X.cols()) throw DimensionError("t-SNE extension: feature mismatch");
  if (k < 1) throw ConfigError("t-SNE extension needs k >= 1");
  const auto n = static_cast<std::size_t>(X.rows());
  const std::size_t kk = std::min(n, static_cast<std::size_t>(k));
  Matrix out = Matrix::Zero(Q.rows(), embedding.cols());
  std::vector<double> dist(n);
  std::vector<std::size_t> order(n);
  for (Eigen::Index r = 0; r < Q.rows(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = (X.row(static_cast<Eigen::Index>(i)) - Q.row(r)).norm();
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                      });
    if (dist[order[0]] == 0.0) {
      out.row(r) = embedding.row(static_cast<Eigen::Index>(order[0]));
      continue;
    }
    double total = 0.0;
    for (std::size_t t = 0; t < kk; ++t) {
      const double w = 1.0 / dist[order[t]];
      out.row(r) += w * embedding.row(static_cast<Eigen::Index>(order[t]));
      total += w;
    }
    out.row(r) /= total;
  }
  return out;
}

ReducedDataset tsne_fit_transform(const Matrix& train, const Matrix& test, int d,
                                  const TsneSettings& settings, std::uint64_t seed) {
  check_target(train, test, d, 2);
  TsneResult fit = tsne_embed(train, d, settings, seed);
  Matrix test_out = tsne_extend(train, fit.embedding, test, settings.neighbors);
  return {std::move(fit.embedding), std::move(test_out), true};
}

AutoencoderModel make_autoencoder(int n_features, int d, bool linear, std::uint64_t seed) {
  if (d < 1 || d > n_features) {
    throw DimensionError("autoencoder code size " + std::to_string(d) + " outside 1.." +
                         std::to_string(n_features));
  }
  const int h = std::max(d, (n_features + 1) / 2);
  std::vector<LayerSpec> layers;
  layers.push_back(LayerSpec::dense(n_features, h));
  if (!linear) layers.push_back(LayerSpec::relu());
  layers.push_back(LayerSpec::dense(h, d));
  const int encoder_layers = static_cast<int>(layers.size());
  layers.push_back(LayerSpec::dense(d, h));
  if (!linear) layers.push_back(LayerSpec::relu());
  layers.push_back(LayerSpec::dense(h, n_features));
  AutoencoderModel model{Network(std::move(layers), n_features), encoder_layers, d};
  model.net.init(seed);
  return model;
}

std::vector<double> train_autoencoder(AutoencoderModel& model, const Matrix& X,
                                      const AutoencoderSettings& settings, std::uint64_t seed) {
  return train_network(model.net, X, X, LossKind::MSE,
                       {settings.epochs, settings.batch_size, settings.learning_rate,
                        seed ^ 0x2545f4914f6cdd1dULL});
}

Matrix encode(const AutoencoderModel& model, const Matrix& X) {
  Matrix out(X.rows(), model.code_dim);
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const auto code = model.net.predict(row_span(X, r), model.encoder_layers);
    for (int k = 0; k < model.code_dim; ++k) out(r, k) = code[static_cast<std::size_t>(k)];
  }
  return out;
}

Matrix reconstruct(const AutoencoderModel& model, const Matrix& X) {
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const auto y = model.net.predict(row_span(X, r));
    for (Eigen::Index k = 0; k < X.cols(); ++k) out(r, k) = y[static_cast<std::size_t>(k)];
  }
  return out;
}

double reconstruction_mse(const AutoencoderModel& model, const Matrix& X) {
  if (X.size() == 0) return 0.0;
  return (reconstruct(model, X) - X).squaredNorm() / static_cast<double>(X.size());
}

ReducedDataset autoencoder_fit_transform(const Matrix& train, const Matrix& test, int d,
                                         const AutoencoderSettings& settings, std::uint64_t seed) {
  check_target(train, test, d, 1);
  AutoencoderModel model = make_autoencoder(static_cast<int>(train.cols()), d, settings.linear, seed);
  train_autoencoder(model, train, settings, seed);
  return {encode(model, train), encode(model, test), true};
}

ReducedDataset reduce(const ReductionSpec& spec, const Matrix& train, const Matrix& test) {
  switch (spec.method) {
    case ReductionMethod::PCA:
      return pca_fit_transform(train, test, spec.target_dim);
    case ReductionMethod::TruncatedSVD:
      return tsvd_fit_transform(train, test, spec.target_dim);
    case ReductionMethod::TSNE: {
      TsneSettings s = spec.tsne;
      const double cap = max_perplexity(train.rows());
      if (s.perplexity >= cap) s.perplexity = cap * (1.0 - 1e-9);
      return tsne_fit_transform(train, test, spec.target_dim, s, spec.seed);
    }
    case ReductionMethod::Autoencoder:
      return autoencoder_fit_transform(train, test, spec.target_dim, spec.autoencoder, spec.seed);
  }
  throw ConfigError("unknown reduction method");
}

}  // namespace qdr
