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
#include <numbers>

#include "qdimred/error.hpp"
#include "qdimred/statevector.hpp"
#include "support.hpp"

using namespace qdr;
using namespace qdr::testing;
using Catch::Approx;

TEST_CASE("init_zero puts all weight on index 0", "[sim]") {
  const StateVector one = init_zero(1);
  REQUIRE(one.dim() == 2);
  CHECK(one[0] == Complex(1, 0));
  CHECK(one[1] == Complex(0, 0));
  const StateVector two = init_zero(2);
  REQUIRE(two.dim() == 4);
  CHECK(two[0] == Complex(1, 0));
  for (std::size_t k = 1; k < 4; ++k) CHECK(two[k] == Complex(0, 0));
  CHECK(init_zero(16).norm() == 1.0);
  CHECK(init_zero(16).dim() == 65536);
}

TEST_CASE("init_zero rejects widths outside 1..16", "[sim]") {
  CHECK_THROWS_AS(init_zero(0), ConfigError);
  CHECK_THROWS_AS(init_zero(17), ConfigError);
}

TEST_CASE("Hadamard and RY(pi) on a single qubit", "[sim]") {
  const StateVector h = apply_gate(init_zero(1), Gate::h(0));
  CHECK(h[0].real() == Approx(1 / std::sqrt(2.0)).margin(1e-15));
  CHECK(h[1].real() == Approx(1 / std::sqrt(2.0)).margin(1e-15));
  const StateVector r = apply_gate(init_zero(1), Gate::ry(0, std::numbers::pi));
  CHECK(std::abs(r[0]) < 1e-15);
  CHECK(qubit_probabilities(r, 0).p1 == Approx(1.0).margin(1e-15));
}

TEST_CASE("qubit 0 is the least significant index bit", "[sim]") {
  StateVector s = init_zero(3);
  s.apply(Gate::rx(1, std::numbers::pi));
  CHECK(std::norm(s[2]) == Approx(1.0).margin(1e-15));
  s = init_zero(3);
  s.apply(Gate::ry(0, std::numbers::pi));
  s.apply(Gate::cnot(0, 2));
  CHECK(std::norm(s[5]) == Approx(1.0).margin(1e-15));
}

TEST_CASE("rotation conventions are exp(-i theta P / 2)", "[sim]") {
  const double t = 0.731;
  const StateVector x = apply_gate(init_zero(1), Gate::rx(0, t));
  CHECK(std::abs(x[0] - Complex(std::cos(t / 2), 0)) < 1e-15);
  CHECK(std::abs(x[1] - Complex(0, -std::sin(t / 2))) < 1e-15);
  const StateVector z = apply_gate(apply_gate(init_zero(1), Gate::h(0)), Gate::rz(0, t));
  CHECK(std::abs(z[0] - std::polar(1 / std::sqrt(2.0), -t / 2)) < 1e-15);
  CHECK(std::abs(z[1] - std::polar(1 / std::sqrt(2.0), t / 2)) < 1e-15);
}

TEST_CASE("U3 equals RZ(phi) RY(theta) RZ(lambda) up to a global phase", "[sim]") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const double t = rng.uniform(-3, 3), p = rng.uniform(-3, 3), l = rng.uniform(-3, 3);
    const StateVector start = random_state(rng, 1);
    const StateVector u = apply_gate(start, Gate::u3(0, t, p, l));
    StateVector v = start;
    v.apply(Gate::rz(0, l));
    v.apply(Gate::ry(0, t));
    v.apply(Gate::rz(0, p));
    const Complex phase = std::polar(1.0, (p + l) / 2);
    CHECK(std::abs(u[0] - phase * v[0]) < 1e-12);
    CHECK(std::abs(u[1] - phase * v[1]) < 1e-12);
  }
}

TEST_CASE("random 3-qubit circuits match the dense matrix chain", "[sim]") {
  Rng rng(2024);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<Gate> gates;
    StateVector s = init_zero(3);
    for (int k = 0; k < 20; ++k) {
      gates.push_back(random_gate(rng, 3));
      s.apply(gates.back());
    }
    CHECK(max_abs_diff(to_eigen(s), dense_run(gates, 3, dense_zero(3))) < 1e-10);
  }
}

TEST_CASE("every gate keeps the norm and its inverse undoes it", "[sim]") {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng.index(5));
    const StateVector start = random_state(rng, n);
    const Gate g = random_gate(rng, n);
    StateVector s = apply_gate(start, g);
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    s.apply(g.inverse());
    CHECK(max_abs_diff(to_eigen(s), to_eigen(start)) < 1e-10);
  }
}

TEST_CASE("rotation by -theta inverts rotation by theta", "[sim]") {
  Rng rng(6);
  for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CRX, GateKind::CRZ,
                     GateKind::MultiRZ}) {
    const StateVector start = random_state(rng, 3);
    const double t = rng.uniform(-6, 6);
    const std::vector<int> w = wire_arity(k) == 2 ? std::vector<int>{2, 0} : std::vector<int>{1};
    StateVector s = apply_gate(start, Gate::make(k, std::array{t}, w));
    s.apply(Gate::make(k, std::array{-t}, w));
    CHECK(max_abs_diff(to_eigen(s), to_eigen(start)) < 1e-10);
  }
}

TEST_CASE("diagonal gates never change amplitude magnitudes", "[sim]") {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const StateVector start = random_state(rng, 4);
    for (GateKind k : {GateKind::RZ, GateKind::CZ, GateKind::CRZ, GateKind::MultiRZ}) {
      CHECK(is_diagonal(k));
      std::vector<double> p(static_cast<std::size_t>(param_arity(k)), rng.uniform(-6, 6));
      const std::vector<int> w = wire_arity(k) == 2 ? std::vector<int>{3, 1} : std::vector<int>{2};
      const StateVector s = apply_gate(start, Gate::make(k, p, w));
      for (std::size_t i = 0; i < s.dim(); ++i) CHECK(std::abs(std::abs(s[i]) - std::abs(start[i])) < 1e-14);
    }
  }
}

TEST_CASE("gate construction validates arity and wires", "[sim]") {
  CHECK_THROWS_AS(Gate::make(GateKind::RX, std::vector<double>{}, std::vector<int>{0}), GateError);
  CHECK_THROWS_AS(Gate::make(GateKind::H, std::vector<double>{1.0}, std::vector<int>{0}), GateError);
  CHECK_THROWS_AS(Gate::make(GateKind::CNOT, std::vector<double>{}, std::vector<int>{1, 1}), GateError);
  CHECK_THROWS_AS(Gate::make(GateKind::CNOT, std::vector<double>{}, std::vector<int>{1}), GateError);
  StateVector s = init_zero(2);
  CHECK_THROWS(s.apply(Gate::h(2)));
  CHECK_THROWS(s.apply(Gate::cnot(0, 5)));
}

TEST_CASE("qubit probabilities", "[sim]") {
  StateVector bell = init_zero(2);
  bell.apply(Gate::h(0));
  bell.apply(Gate::cnot(0, 1));
  const auto p = qubit_probabilities(bell, 0);
  CHECK(p.p0 == Approx(0.5).margin(1e-15));
  CHECK(p.p1 == Approx(0.5).margin(1e-15));
  for (int q = 0; q < 5; ++q) {
    const auto z = qubit_probabilities(init_zero(5), q);
    CHECK(z.p0 == 1.0);
    CHECK(z.p1 == 0.0);
  }
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const StateVector s = random_state(rng, 4);
    for (int q = 0; q < 4; ++q) {
      double oracle = 0.0;
      int count = 0;
      for (std::size_t i = 0; i < 16; ++i) {
        if (i & (std::size_t{1} << q)) {
          oracle += std::norm(s[i]);
          ++count;
        }
      }
      REQUIRE(count == 8);
      const auto pr = qubit_probabilities(s, q);
      CHECK(std::abs(pr.p1 - oracle) < 1e-12);
      CHECK(std::abs(pr.p0 + pr.p1 - 1.0) < 1e-10);
    }
  }
  CHECK_THROWS_AS(qubit_probabilities(bell, 2), ConfigError);
  CHECK_THROWS_AS(qubit_probabilities(bell, -1), ConfigError);
}

TEST_CASE("inner products", "[sim]") {
  Rng rng(9);
  const StateVector s = random_state(rng, 3);
  CHECK(std::abs(inner_product(s, s) - Complex(1, 0)) < 1e-12);
  const StateVector one = apply_gate(init_zero(1), Gate::rx(0, std::numbers::pi));
  CHECK(std::abs(inner_product(init_zero(1), one)) < 1e-15);
  for (int rep = 0; rep < 10; ++rep) {
    const StateVector a = random_state(rng, 3), b = random_state(rng, 3);
    Complex oracle = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) oracle += std::conj(a[i]) * b[i];
    CHECK(std::abs(inner_product(a, b) - oracle) < 1e-12);
    CHECK(std::abs(inner_product(a, b)) <= 1 + 1e-10);
  }
  CHECK_THROWS_AS(inner_product(init_zero(2), init_zero(3)), DimensionError);
}

TEST_CASE("fused two-qubit blocks match gate-by-gate application", "[sim]") {
  Rng rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng.index(3));
    const int a = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    int b = a;
    while (b == a) b = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    // Build a block on local wires 0, 1 and lift it to (a, b).
    Matrix4 m = identity4();
    StateVector ref = random_state(rng, n);
    StateVector fused = ref;
    for (int k = 0; k < 6; ++k) {
      Gate local = random_gate(rng, 2);
      Gate global = local;
      global.wires[0] = local.wires[0] == 0 ? a : b;
      if (wire_arity(local.kind) == 2) global.wires[1] = local.wires[1] == 0 ? a : b;
      m = matmul4(local_matrix(local), m);
      ref.apply(global);
    }
    apply_matrix4(fused, a, b, m);
    CHECK(max_abs_diff(to_eigen(fused), to_eigen(ref)) < 1e-12);
  }
}
