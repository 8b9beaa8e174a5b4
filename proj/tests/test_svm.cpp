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

#include "qdimred/error.hpp"
#include "qdimred/svm.hpp"
#include "qp_oracle.hpp"
#include "svm_corpus.hpp"

using namespace qdr;
using namespace qdr::testing;
using Catch::Approx;

namespace {

void check_feasible(const SvcModel& m, std::span<const int> y) {
  double eq = 0.0;
  for (std::size_t i = 0; i < m.alphas.size(); ++i) {
    CHECK(m.alphas[i] >= 0.0);
    CHECK(m.alphas[i] <= m.C);
    eq += m.alphas[i] * y[i];
  }
  CHECK(std::abs(eq) < 1e-8);
}

double decision_oracle(const SvcModel& m, const Matrix& K, Eigen::Index row) {
  double f = m.bias;
  for (std::size_t i = 0; i < m.alphas.size(); ++i)
    f += m.alphas[i] * m.labels[i] * K(row, static_cast<Eigen::Index>(i));
  return f;
}

}  // namespace

TEST_CASE("two orthogonal samples", "[svm]") {
  const Matrix K = Matrix::Identity(2, 2);
  const std::vector<int> y{1, -1};
  const SvcModel m = fit_precomputed(K, y);
  CHECK(m.alphas[0] == Approx(1.0).margin(1e-9));
  CHECK(m.alphas[1] == Approx(1.0).margin(1e-9));
  CHECK(m.bias == Approx(0.0).margin(1e-9));
  CHECK(m.dual_objective == Approx(1.0).margin(1e-9));
}

TEST_CASE("SMO reaches the brute-force dual optimum on the small corpus", "[svm]") {
  for (const SvcInstance& inst : small_svc_corpus()) {
    SvcSettings s;
    s.C = inst.C;
    const SvcModel m = fit_precomputed(inst.K, inst.y, s);
    const QpSolution best = brute_force_dual(inst.K, inst.y, inst.C);
    REQUIRE(std::isfinite(best.objective));
    CHECK(std::abs(m.dual_objective - best.objective) < 1e-6);
    check_feasible(m, inst.y);
    CHECK(m.dual_objective == Approx(dual_value(inst.K, inst.y, m.alphas)).margin(1e-10));
  }
}

TEST_CASE("KKT conditions hold at the returned model", "[svm]") {
  for (const SvcInstance& inst : small_svc_corpus()) {
    SvcSettings s;
    s.C = inst.C;
    const SvcModel m = fit_precomputed(inst.K, inst.y, s);
    // Only meaningful when a free vector pins the bias.
    bool has_free = false;
    for (double a : m.alphas) has_free |= a > 1e-8 && a < m.C - 1e-8;
    if (!has_free) continue;
    for (Eigen::Index i = 0; i < inst.K.rows(); ++i) {
      const double yf = inst.y[static_cast<std::size_t>(i)] * decision_oracle(m, inst.K, i);
      const double a = m.alphas[static_cast<std::size_t>(i)];
      const double tol = 2 * s.tol;
      if (a <= 1e-8) CHECK(yf >= 1 - tol);
      else if (a >= m.C - 1e-8) CHECK(yf <= 1 + tol);
      else CHECK(std::abs(yf - 1) <= tol);
    }
  }
}

TEST_CASE("decision values equal direct summation", "[svm]") {
  Rng rng(3);
  for (const SvcInstance& inst : small_svc_corpus()) {
    const SvcModel m = fit_precomputed(inst.K, inst.y);
    for (Eigen::Index i = 0; i < inst.K.rows(); ++i) {
      CHECK(decision_value(m, row_span(inst.K, i)) == Approx(decision_oracle(m, inst.K, i)).margin(1e-10));
    }
  }
}

TEST_CASE("duplicated rows leave predictions unchanged", "[svm]") {
  // Duplicating every row doubles each sample's share of the box, so the
  // duplicated problem at C/2 has the same decision function as the original at C.
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix X(4, 2);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    const std::vector<int> y{1, -1, 1, -1};
    Matrix X2(8, 2);
    X2 << X, X;
    std::vector<int> y2 = y;
    y2.insert(y2.end(), y.begin(), y.end());
    SvcSettings half;
    half.C = 0.5;
    const SvcModel a = fit_rbf(X, y, 0.5);
    const SvcModel b = fit_rbf(X2, y2, 0.5, half);
    CHECK(std::abs(a.dual_objective - brute_force_dual(rbf_kernel(X, X, 0.5), y, 1.0).objective) < 1e-6);
    CHECK(std::abs(b.dual_objective - brute_force_dual(rbf_kernel(X2, X2, 0.5), y2, 0.5).objective) < 1e-6);
    CHECK(b.dual_objective == Approx(a.dual_objective).margin(1e-6));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      CHECK(predict_features(a, row_span(X, i)) == predict_features(b, row_span(X, i)));
    }
    for (int t = 0; t < 20; ++t) {
      const std::vector<double> q{rng.normal() * 2, rng.normal() * 2};
      const double fa = decision_value_features(a, q), fb = decision_value_features(b, q);
      CHECK(fa == Approx(fb).margin(1e-3));
      if (std::abs(fa) > 1e-3) CHECK((fa > 0) == (fb > 0));
    }
  }
}

TEST_CASE("identical labels predict that label", "[svm]") {
  Matrix X(5, 2);
  X << 0, 1, 2, 3, -1, 0, 4, 4, 1, 1;
  for (int label : {1, -1}) {
    const std::vector<int> y(5, label);
    const SvcModel m = fit_rbf(X, y, 1.0);
    for (Eigen::Index i = 0; i < X.rows(); ++i) CHECK(predict_features(m, row_span(X, i)) == label);
    CHECK(predict_features(m, std::vector{10.0, -10.0}) == label);
  }
}

TEST_CASE("support vectors of a separable problem keep their label", "[svm]") {
  Matrix X(6, 2);
  X << 0, 0, 0.5, 0.2, 0.1, 0.6, 3, 3, 3.4, 2.8, 2.9, 3.5;
  const std::vector<int> y{-1, -1, -1, 1, 1, 1};
  SvcSettings s;
  s.C = 100.0;
  const SvcModel m = fit_rbf(X, y, 0.5, s);
  REQUIRE(!m.support.empty());
  for (std::size_t i : m.support) CHECK(predict_features(m, row_span(X, static_cast<Eigen::Index>(i))) == y[i]);
}

TEST_CASE("a vanishing RBF width gives a constant prediction", "[svm]") {
  Rng rng(5);
  Matrix X(20, 3);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  X = X.rowwise() - X.colwise().mean();
  std::vector<int> y(20);
  for (int i = 0; i < 20; ++i) y[static_cast<std::size_t>(i)] = i < 13 ? 1 : -1;
  const SvcModel m = fit_rbf(X, y, 1e-9);
  const int first = predict_features(m, row_span(X, 0));
  for (Eigen::Index i = 0; i < X.rows(); ++i) CHECK(predict_features(m, row_span(X, i)) == first);
  CHECK(first == 1);
}

TEST_CASE("ties resolve to +1", "[svm]") {
  SvcModel m;
  m.alphas = {0.0, 0.0};
  m.labels = {1, -1};
  m.bias = 0.0;
  CHECK(predict(m, std::vector{0.3, 0.7}) == 1);
}

TEST_CASE("SVC input validation", "[svm]") {
  CHECK_THROWS_AS(fit_precomputed(Matrix::Identity(2, 3), std::vector{1, -1}), UsageError);
  CHECK_THROWS_AS(fit_precomputed(Matrix::Identity(2, 2), std::vector{1, 0}), UsageError);
  CHECK_THROWS_AS(fit_precomputed(Matrix::Identity(2, 2), std::vector{1, -1, 1}), UsageError);
  const SvcModel m = fit_precomputed(Matrix::Identity(2, 2), std::vector{1, -1});
  CHECK_THROWS_AS(decision_value(m, std::vector{1.0}), DimensionError);
}

TEST_CASE("exhausted passes raise a convergence error with a partial model", "[svm]") {
  Rng rng(6);
  Matrix X(40, 2);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) y[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? 1 : -1;
  const Matrix K = rbf_kernel(X, X, 1.0);
  SvcSettings s;
  s.max_passes = 1;
  s.tol = 1e-9;
  CHECK_THROWS_AS(fit_precomputed(K, y, s), ConvergenceError);
  const SvcModel partial = fit_precomputed_partial(K, y, s);
  CHECK_FALSE(partial.converged);
  check_feasible(partial, y);
}

TEST_CASE("RBF kernel and gamma heuristic", "[svm]") {
  Matrix A(2, 2), B(1, 2);
  A << 0, 0, 1, 2;
  B << 1, 0;
  const Matrix K = rbf_kernel(A, B, 0.5);
  CHECK(K(0, 0) == Approx(std::exp(-0.5)).margin(1e-15));
  CHECK(K(1, 0) == Approx(std::exp(-2.0)).margin(1e-15));
  Matrix X(2, 2);
  X << 0, 0, 2, 2;  // all-entry variance 1
  CHECK(rbf_gamma_scale(X) == Approx(0.5).margin(1e-15));
}
