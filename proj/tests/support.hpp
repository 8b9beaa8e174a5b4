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

// Shared oracles for the test suite. Everything here is written from gate and
// kernel definitions directly and never calls the simulator kernels it checks.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qdimred/rng.hpp"
#include "qdimred/statevector.hpp"

namespace qdr::testing {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline CMatrix one_qubit_matrix(const Gate& g) {
  const Complex i(0.0, 1.0);
  const double t = g.params[0];
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  CMatrix u(2, 2);
  switch (g.kind) {
    case GateKind::H: u << 1, 1, 1, -1; u /= std::sqrt(2.0); break;
    case GateKind::RX:
    case GateKind::CRX: u << c, -i * s, -i * s, c; break;
    case GateKind::RY: u << c, -s, s, c; break;
    case GateKind::RZ:
    case GateKind::CRZ: u << std::exp(-i * t / 2.0), 0, 0, std::exp(i * t / 2.0); break;
    case GateKind::U3: {
      const double phi = g.params[1], lam = g.params[2];
      u << c, -std::exp(i * lam) * s, std::exp(i * phi) * s, std::exp(i * (phi + lam)) * c;
      break;
    }
    case GateKind::CNOT: u << 0, 1, 1, 0; break;
    default: u.setIdentity(); break;
  }
  return u;
}

inline int bit(std::size_t index, int q) { return static_cast<int>((index >> q) & 1U); }

// Full 2^n x 2^n matrix of a gate, qubit 0 as the least significant bit.
inline CMatrix dense_gate(const Gate& g, int n) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const int a = g.wires[0], b = g.wires[1];
  const Complex i(0.0, 1.0);
  const CMatrix u = one_qubit_matrix(g);
  for (std::size_t col = 0; col < dim; ++col) {
    const auto c = static_cast<Eigen::Index>(col);
    switch (g.kind) {
      case GateKind::H:
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ:
      case GateKind::U3: {
        for (int out = 0; out < 2; ++out) {
          const std::size_t row = (col & ~(std::size_t{1} << a)) | (std::size_t(out) << a);
          m(static_cast<Eigen::Index>(row), c) += u(out, bit(col, a));
        }
        break;
      }
      case GateKind::CNOT:
      case GateKind::CRX:
      case GateKind::CRZ: {
        if (bit(col, a) == 0) {
          m(c, c) = 1.0;
          break;
        }
        for (int out = 0; out < 2; ++out) {
          const std::size_t row = (col & ~(std::size_t{1} << b)) | (std::size_t(out) << b);
          m(static_cast<Eigen::Index>(row), c) += u(out, bit(col, b));
        }
        break;
      }
      case GateKind::CZ:
        m(c, c) = (bit(col, a) && bit(col, b)) ? -1.0 : 1.0;
        break;
      case GateKind::MultiRZ: {
        const double zz = (bit(col, a) == bit(col, b)) ? 1.0 : -1.0;
        m(c, c) = std::exp(-i * g.params[0] * zz / 2.0);
        break;
      }
    }
  }
  return m;
}

inline CVector to_eigen(const StateVector& s) {
  CVector v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t k = 0; k < s.dim(); ++k) v(static_cast<Eigen::Index>(k)) = s[k];
  return v;
}

inline CVector dense_run(const std::vector<Gate>& gates, int n, CVector v) {
  for (const Gate& g : gates) v = dense_gate(g, n) * v;
  return v;
}

inline CVector dense_zero(int n) {
  CVector v = CVector::Zero(Eigen::Index{1} << n);
  v(0) = 1.0;
  return v;
}

inline Gate random_gate(Rng& rng, int n) {
  static constexpr GateKind kinds[] = {GateKind::H,   GateKind::RX,   GateKind::RY,
                                       GateKind::RZ,  GateKind::U3,   GateKind::CNOT,
                                       GateKind::CZ,  GateKind::CRX,  GateKind::CRZ,
                                       GateKind::MultiRZ};
  for (;;) {
    const GateKind k = kinds[rng.index(std::size(kinds))];
    if (wire_arity(k) == 2 && n < 2) continue;
    const int a = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    int b = a;
    while (wire_arity(k) == 2 && b == a) b = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    std::vector<double> p;
    for (int j = 0; j < param_arity(k); ++j) p.push_back(rng.uniform(-2 * std::numbers::pi, 2 * std::numbers::pi));
    std::vector<int> w{a};
    if (wire_arity(k) == 2) w.push_back(b);
    return Gate::make(k, p, w);
  }
}

inline StateVector random_state(Rng& rng, int n) {
  std::vector<Complex> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = Complex(rng.normal(), rng.normal());
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(n, std::move(amps));
}

inline double max_abs_diff(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace qdr::testing
