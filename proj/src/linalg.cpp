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

#include "qdimred/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdimred/error.hpp"

namespace qdr {

Matrix take_rows(const Matrix& m, std::span<const std::size_t> idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

namespace {

std::vector<Eigen::Index> descending_order(const Vector& v) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v[a] > v[b]; });
  return order;
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& input, double tol, int max_sweeps) {
  if (input.rows() != input.cols()) {
    throw DimensionError("jacobi_eigen needs a square matrix");
  }
  const Eigen::Index n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= tol * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  Vector diag = a.diagonal();
  const auto order = descending_order(diag);
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values[j] = diag[order[static_cast<std::size_t>(j)]];
    out.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  out.sweeps = sweep;
  return out;
}

ThinSvd jacobi_svd(const Matrix& input, double tol, int max_sweeps) {
  const Eigen::Index m = input.cols();
  // Column-major copy: the rotations below act on whole columns.
  Eigen::MatrixXd w = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(m, m);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd wp = w.col(p);
        w.col(p) = c * wp - s * w.col(q);
        w.col(q) = s * wp + c * w.col(q);
        const Eigen::VectorXd vp = v.col(p);
        v.col(p) = c * vp - s * v.col(q);
        v.col(q) = s * vp + c * v.col(q);
      }
    }
    if (!rotated) break;
  }

  Vector sigma(m);
  for (Eigen::Index j = 0; j < m; ++j) sigma[j] = w.col(j).norm();
  const auto order = descending_order(sigma);
  ThinSvd out;
  out.singular_values.resize(m);
  out.v.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.singular_values[j] = sigma[order[static_cast<std::size_t>(j)]];
    out.v.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  out.sweeps = sweep;
  return out;
}

void fix_column_signs(Matrix& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < columns.rows(); ++i) {
      if (std::abs(columns(i, j)) > std::abs(columns(best, j)) + 1e-12) best = i;
    }
    if (columns(best, j) < 0) columns.col(j) = -columns.col(j);
  }
}

}  // namespace qdr
