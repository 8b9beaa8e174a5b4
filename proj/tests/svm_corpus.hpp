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

// Fixed corpus of small SVC instances (2..8 samples) shared by the unit tests
// and the acceptance run. Deterministic from its own seed.

#include <cmath>
#include <vector>

#include "qdimred/linalg.hpp"
#include "qdimred/rng.hpp"
#include "qdimred/svm.hpp"

namespace qdr::testing {

struct SvcInstance {
  Matrix K;
  std::vector<int> y;
  double C = 1.0;
};

inline std::vector<SvcInstance> small_svc_corpus() {
  std::vector<SvcInstance> out;
  Rng rng(0x5eed5eedULL);
  const double Cs[] = {0.1, 1.0, 10.0};
  for (int rep = 0; rep < 120; ++rep) {
    const int m = 2 + static_cast<int>(rng.index(7));
    const int dim = 1 + static_cast<int>(rng.index(4));
    Matrix X(m, dim);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    if (rep % 5 == 4 && m >= 4) X.row(m - 1) = X.row(0);  // duplicated row
    SvcInstance inst;
    inst.y.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) inst.y[static_cast<std::size_t>(i)] = i % 2 ? -1 : 1;
    for (int i = m - 1; i > 0; --i) std::swap(inst.y[static_cast<std::size_t>(i)], inst.y[rng.index(static_cast<std::size_t>(i) + 1)]);
    switch (rep % 3) {
      case 0: inst.K = rbf_kernel(X, X, rng.uniform(0.1, 2.0)); break;
      case 1: inst.K = X * X.transpose(); break;
      default: {
        const Matrix L = X * X.transpose();
        inst.K = (L.array() / static_cast<double>(dim) + 1.0).square().matrix();  // polynomial
        break;
      }
    }
    inst.C = Cs[rng.index(3)];
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace qdr::testing
