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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qdimred/dimred.hpp"
#include "qdimred/error.hpp"
#include "qdimred/rng.hpp"

using namespace qdr;
using Catch::Approx;

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

// Two tight clusters in 16 dimensions, 20 rows each.
Matrix two_clusters(std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(40, 16);
  for (Eigen::Index i = 0; i < 40; ++i)
    for (Eigen::Index j = 0; j < 16; ++j) X(i, j) = (i < 20 ? 0.0 : 10.0) + rng.normal();
  return X;
}

// Columns equal up to sign.
double max_signed_gap(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double plus = (a.col(j) - b.col(j)).cwiseAbs().maxCoeff();
    const double minus = (a.col(j) + b.col(j)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(plus, minus));
  }
  return worst;
}

}  // namespace

TEST_CASE("Jacobi eigensolver matches a reference decomposition", "[dimred]") {
  Rng rng(1);
  for (int n : {1, 2, 5, 16}) {
    const Matrix A = random_matrix(rng, n + 3, n);
    const Matrix S = A.transpose() * A;
    const SymmetricEigen e = jacobi_eigen(S);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(S);
    for (int k = 0; k < n; ++k) CHECK(e.values(k) == Approx(ref.eigenvalues()(n - 1 - k)).margin(1e-10));
    CHECK((S * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Jacobi SVD matches a reference decomposition", "[dimred]") {
  Rng rng(2);
  for (auto [r, c] : {std::pair{6, 3}, std::pair{3, 6}, std::pair{16, 16}}) {
    const Matrix A = random_matrix(rng, r, c);
    const ThinSvd s = jacobi_svd(A);
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
    const auto k = std::min(r, c);
    for (int i = 0; i < k; ++i) CHECK(s.singular_values(i) == Approx(ref.singularValues()(i)).margin(1e-10));
    for (Eigen::Index i = 1; i < s.singular_values.size(); ++i) CHECK(s.singular_values(i) <= s.singular_values(i - 1));
  }
}

TEST_CASE("PCA of three collinear points", "[dimred]") {
  Matrix X(3, 2);
  X << 1, 1, 2, 2, 3, 3;
  const ReducedDataset r = pca_fit_transform(X, Matrix(0, 2), 1);
  CHECK(r.train(0, 0) == Approx(-std::sqrt(2.0)).margin(1e-12));
  CHECK(r.train(1, 0) == Approx(0.0).margin(1e-12));
  CHECK(r.train(2, 0) == Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(r.test.rows() == 0);
}

TEST_CASE("full-rank PCA preserves pairwise distances", "[dimred]") {
  Rng rng(3);
  const Matrix X = random_matrix(rng, 20, 6);
  const Matrix Y = pca_fit_transform(X, Matrix(0, 6), 6).train;
  for (Eigen::Index i = 0; i < 20; ++i)
    for (Eigen::Index j = 0; j < 20; ++j)
      CHECK(std::abs((X.row(i) - X.row(j)).norm() - (Y.row(i) - Y.row(j)).norm()) < 1e-8);
}

TEST_CASE("PCA explained variance and orthonormality", "[dimred]") {
  Rng rng(4);
  const Matrix X = random_matrix(rng, 50, 8) * random_matrix(rng, 8, 8);
  const Matrix centred = X.rowwise() - X.colwise().mean();
  const Eigen::MatrixXd cov = centred.transpose() * centred / 49.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(cov);
  for (int d : {1, 3, 8}) {
    const PcaModel m = fit_pca(X, d);
    double top = 0.0;
    for (int k = 0; k < d; ++k) top += ref.eigenvalues()(7 - k);
    CHECK(m.eigenvalues.sum() == Approx(top).margin(1e-8));
    const Eigen::MatrixXd gram = m.components.transpose() * m.components;
    CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index j = 0; j < m.components.cols(); ++j) {
      Eigen::Index arg = 0;
      m.components.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(m.components(arg, j) > 0.0);
    }
  }
}

TEST_CASE("truncated SVD of a diagonal matrix", "[dimred]") {
  Matrix X(2, 2);
  X << 3, 0, 0, 2;
  const Matrix Y = tsvd_fit_transform(X, Matrix(0, 2), 1).train;
  CHECK(std::abs(Y(0, 0)) == Approx(3.0).margin(1e-12));
  CHECK(Y(1, 0) == Approx(0.0).margin(1e-12));
}

TEST_CASE("truncated SVD recovers a rank-one matrix", "[dimred]") {
  Rng rng(5);
  const Matrix X = random_matrix(rng, 7, 1) * random_matrix(rng, 1, 5);
  const TsvdModel m = fit_tsvd(X, 1);
  const Matrix US = transform(m, X);
  CHECK((X - US * m.components.transpose()).norm() < 1e-8);
  CHECK(m.singular_values(0) >= 0.0);
}

TEST_CASE("PCA and truncated SVD agree on centred data", "[dimred]") {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix X = random_matrix(rng, 30, 6) * random_matrix(rng, 6, 6);
    X = X.rowwise() - X.colwise().mean();
    const Matrix test = random_matrix(rng, 5, 6);
    const ReducedDataset a = pca_fit_transform(X, test, 4);
    const ReducedDataset b = tsvd_fit_transform(X, test, 4);
    CHECK(max_signed_gap(a.train, b.train) < 1e-8);
    CHECK(max_signed_gap(a.test, b.test) < 1e-8);
  }
}

TEST_CASE("reductions fit on train rows only", "[dimred]") {
  Rng rng(7);
  const Matrix train = random_matrix(rng, 40, 6);
  const Matrix test = random_matrix(rng, 10, 6);
  const Matrix zeros = Matrix::Zero(10, 6);
  for (ReductionMethod method : {ReductionMethod::PCA, ReductionMethod::TruncatedSVD,
                                 ReductionMethod::TSNE, ReductionMethod::Autoencoder}) {
    ReductionSpec spec;
    spec.method = method;
    spec.target_dim = 3;
    spec.seed = 9;
    spec.tsne.iterations = 300;
    spec.autoencoder.epochs = 20;
    const ReducedDataset a = reduce(spec, train, test);
    const ReducedDataset b = reduce(spec, train, zeros);
    CHECK(a.train == b.train);
    CHECK(a.test != b.test);
    CHECK(a.train.cols() == 3);
    CHECK(a.test.cols() == 3);
    CHECK(a.fitted_on_train);
    const ReducedDataset c = reduce(spec, train, test);
    CHECK(c.train == a.train);
    CHECK(c.test == a.test);
  }
}

TEST_CASE("reduction dimension checks", "[dimred]") {
  Rng rng(8);
  const Matrix X = random_matrix(rng, 10, 4);
  CHECK_THROWS_AS(pca_fit_transform(X, Matrix(0, 4), 5), DimensionError);
  CHECK_THROWS_AS(tsvd_fit_transform(X, Matrix(0, 4), 0), DimensionError);
  CHECK_THROWS_AS(pca_fit_transform(X, Matrix(2, 3), 2), DimensionError);
  CHECK_THROWS_AS(autoencoder_fit_transform(X, Matrix(0, 4), 5, {}, 0), DimensionError);
  CHECK(pca_fit_transform(X, Matrix(0, 4), 4).train.cols() == 4);
}

TEST_CASE("perplexity calibration", "[dimred]") {
  const Matrix X = two_clusters(1);
  const Matrix P = tsne_affinities(X, 10.0);
  CHECK(P.sum() == Approx(1.0).margin(1e-12));
  CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(max_perplexity(40) == Approx(13.0));
  CHECK_THROWS_AS(tsne_affinities(X, 13.0), ConfigError);
}

TEST_CASE("t-SNE separates two clusters", "[dimred]") {
  const Matrix X = two_clusters(2);
  TsneSettings s;
  s.perplexity = 10.0;
  s.iterations = 500;
  const TsneResult r = tsne_embed(X, 2, s, 3);
  const Matrix& Y = r.embedding;
  const Eigen::RowVectorXd c0 = Y.topRows(20).colwise().mean(), c1 = Y.bottomRows(20).colwise().mean();
  double intra = 0.0;
  int pairs = 0;
  for (Eigen::Index i = 0; i < 40; ++i)
    for (Eigen::Index j = i + 1; j < 40; ++j)
      if ((i < 20) == (j < 20)) {
        intra += (Y.row(i) - Y.row(j)).norm();
        ++pairs;
      }
  CHECK((c0 - c1).norm() >= 3.0 * intra / pairs);
  CHECK(r.kl_history.size() == 500);
  CHECK(r.kl_history.back() < r.kl_history[99]);
  CHECK(tsne_embed(X, 2, s, 3).embedding == Y);
}

TEST_CASE("t-SNE test extension", "[dimred]") {
  const Matrix X = two_clusters(3);
  TsneSettings s;
  s.perplexity = 10.0;
  s.iterations = 300;
  const TsneResult r = tsne_embed(X, 2, s, 1);
  const Matrix ext = tsne_extend(X, r.embedding, X.topRows(3), 5);
  CHECK(ext == r.embedding.topRows(3));
  Matrix q = X.row(0) * 0.5 + X.row(1) * 0.5;
  const Matrix e = tsne_extend(X, r.embedding, q, 5);
  const Eigen::RowVectorXd c0 = r.embedding.topRows(20).colwise().mean();
  const Eigen::RowVectorXd c1 = r.embedding.bottomRows(20).colwise().mean();
  CHECK((e.row(0) - c0).norm() < (e.row(0) - c1).norm());
}

TEST_CASE("linear autoencoder recovers a linear subspace", "[dimred]") {
  Rng rng(4);
  const Matrix X = random_matrix(rng, 200, 2) * random_matrix(rng, 2, 6) * 0.5;
  AutoencoderModel m = make_autoencoder(6, 2, true, 5);
  AutoencoderSettings s;
  s.epochs = 400;
  s.linear = true;
  s.learning_rate = 0.01;
  train_autoencoder(m, X, s, 5);
  CHECK(reconstruction_mse(m, X) < 1e-3);
}

TEST_CASE("autoencoder training lowers reconstruction error", "[dimred]") {
  Rng rng(5);
  const Matrix X = random_matrix(rng, 100, 8);
  AutoencoderModel m = make_autoencoder(8, 3, false, 2);
  const double before = reconstruction_mse(m, X);
  AutoencoderSettings s;
  s.epochs = 50;
  const auto history = train_autoencoder(m, X, s, 2);
  CHECK(history.size() == 50);
  CHECK(reconstruction_mse(m, X) <= before);
}

TEST_CASE("autoencoder layout and the zero-epoch no-op", "[dimred]") {
  const AutoencoderModel m = make_autoencoder(16, 4, false, 1);
  CHECK(m.code_dim == 4);
  CHECK(m.net.output_size() == 16);
  CHECK(m.net.layers().front().out == 8);  // h = max(4, 16 / 2)
  Rng rng(6);
  const Matrix X = random_matrix(rng, 10, 16);
  AutoencoderSettings s;
  s.epochs = 0;
  const ReducedDataset a = autoencoder_fit_transform(X, X, 4, s, 7);
  const ReducedDataset b = autoencoder_fit_transform(X, X, 4, s, 7);
  CHECK(a.train == b.train);
  CHECK(a.train == encode(make_autoencoder(16, 4, false, 7), X));
}

TEST_CASE("reduction names round-trip", "[dimred]") {
  for (ReductionMethod m : {ReductionMethod::PCA, ReductionMethod::TruncatedSVD,
                            ReductionMethod::TSNE, ReductionMethod::Autoencoder})
    CHECK(parse_reduction_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_reduction_method("isomap"), ConfigError);
}
