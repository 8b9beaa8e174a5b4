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

#include <Eigen/Dense>

namespace qdr {

// Sample-major dense matrix: one row per sample.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline std::span<const double> row_span(const Matrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

// Rows of m selected by idx, in order.
Matrix take_rows(const Matrix& m, std::span<const std::size_t> idx);

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // column j pairs with values[j]
  int sweeps = 0;
};

// Cyclic Jacobi eigensolver for a symmetric matrix. Off-diagonal mass is
// driven below tol * ||A||_F.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-14, int max_sweeps = 100);

struct ThinSvd {
  Vector singular_values;  // descending, non-negative
  Matrix v;                // right singular vectors as columns
  int sweeps = 0;
};

// One-sided (Hestenes) Jacobi SVD of an n x m matrix, n >= 1. Returns the
// right factor and singular values; U is implied as A V / sigma.
ThinSvd jacobi_svd(const Matrix& a, double tol = 1e-15, int max_sweeps = 100);

// Flip each column so its largest-magnitude entry is positive (first such
// entry on ties).
void fix_column_signs(Matrix& columns);

}  // namespace qdr
