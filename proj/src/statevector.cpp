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

#include "qdimred/statevector.hpp"

#include <cmath>
#include <string>

#include "qdimred/error.hpp"

namespace qdr {
namespace {

// Complex products written out so the hot loops avoid the NaN-recovery path
// of std::complex multiplication.
inline Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex cconj_mul(Complex a, Complex b) {  // conj(a) * b
  return {a.real() * b.real() + a.imag() * b.imag(),
          a.real() * b.imag() - a.imag() * b.real()};
}

inline std::size_t insert_zero_bit(std::size_t k, int bit) {
  const std::size_t low = k & ((std::size_t{1} << bit) - 1);
  return ((k >> bit) << (bit + 1)) | low;
}

inline std::size_t insert_two_zero_bits(std::size_t k, int a, int b) {
  const int lo = a < b ? a : b;
  const int hi = a < b ? b : a;
  return insert_zero_bit(insert_zero_bit(k, lo), hi);
}

void apply_matrix_1q(std::span<Complex> amps, int q, const std::array<Complex, 4>& m) {
  const std::size_t half = amps.size() / 2;
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = insert_zero_bit(k, q);
    const std::size_t i1 = i0 | bit;
    const Complex a = amps[i0];
    const Complex b = amps[i1];
    amps[i0] = cmul(m[0], a) + cmul(m[1], b);
    amps[i1] = cmul(m[2], a) + cmul(m[3], b);
  }
}

void apply_real_1q(std::span<Complex> amps, int q, double m00, double m01,
                   double m10, double m11) {
  const std::size_t half = amps.size() / 2;
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = insert_zero_bit(k, q);
    const std::size_t i1 = i0 | bit;
    const Complex a = amps[i0];
    const Complex b = amps[i1];
    amps[i0] = m00 * a + m01 * b;
    amps[i1] = m10 * a + m11 * b;
  }
}

// RX-shaped matrix [[c, -i s], [-i s, c]].
void apply_rx_1q(std::span<Complex> amps, int q, double c, double s) {
  const std::size_t half = amps.size() / 2;
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = insert_zero_bit(k, q);
    const std::size_t i1 = i0 | bit;
    const Complex a = amps[i0];
    const Complex b = amps[i1];
    amps[i0] = {c * a.real() + s * b.imag(), c * a.imag() - s * b.real()};
    amps[i1] = {c * b.real() + s * a.imag(), c * b.imag() - s * a.real()};
  }
}

void apply_phase_1q(std::span<Complex> amps, int q, Complex p0, Complex p1) {
  const std::size_t half = amps.size() / 2;
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = insert_zero_bit(k, q);
    amps[i0] = cmul(p0, amps[i0]);
    amps[i0 | bit] = cmul(p1, amps[i0 | bit]);
  }
}

// Applies m to the target wire on the control=1 subspace. Passing the RX or
// RZ forms keeps one code path for all controlled rotations.
void apply_controlled_1q(std::span<Complex> amps, int control, int target,
                         const std::array<Complex, 4>& m) {
  const std::size_t quarter = amps.size() / 4;
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i0 = insert_two_zero_bits(k, control, target) | cbit;
    const std::size_t i1 = i0 | tbit;
    const Complex a = amps[i0];
    const Complex b = amps[i1];
    amps[i0] = cmul(m[0], a) + cmul(m[1], b);
    amps[i1] = cmul(m[2], a) + cmul(m[3], b);
  }
}

void apply_controlled_phase(std::span<Complex> amps, int control, int target,
                            Complex p0, Complex p1) {
  const std::size_t quarter = amps.size() / 4;
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i0 = insert_two_zero_bits(k, control, target) | cbit;
    amps[i0] = cmul(p0, amps[i0]);
    amps[i0 | tbit] = cmul(p1, amps[i0 | tbit]);
  }
}

void apply_cnot(std::span<Complex> amps, int control, int target) {
  const std::size_t quarter = amps.size() / 4;
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i0 = insert_two_zero_bits(k, control, target) | cbit;
    std::swap(amps[i0], amps[i0 | tbit]);
  }
}

void apply_cz(std::span<Complex> amps, int a, int b) {
  const std::size_t quarter = amps.size() / 4;
  const std::size_t both = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i = insert_two_zero_bits(k, a, b) | both;
    amps[i] = -amps[i];
  }
}

void apply_multi_rz(std::span<Complex> amps, int a, int b, double theta) {
  const Complex even = std::polar(1.0, -theta / 2.0);
  const Complex odd = std::polar(1.0, theta / 2.0);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const bool parity = (((i >> a) ^ (i >> b)) & 1U) != 0;
    amps[i] = cmul(parity ? odd : even, amps[i]);
  }
}

void check_wires(const Gate& g, int n_qubits) {
  for (int w = 0; w < g.num_wires(); ++w) {
    if (g.wires[w] < 0 || g.wires[w] >= n_qubits) {
      throw GateError(std::string(to_string(g.kind)) + ": wire " +
                      std::to_string(g.wires[w]) + " out of range for " +
                      std::to_string(n_qubits) + " qubits");
    }
  }
}

}  // namespace

int param_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::CZ:
      return 0;
    case GateKind::U3:
      return 3;
    default:
      return 1;
  }
}

int wire_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::U3:
      return 1;
    default:
      return 2;
  }
}

bool is_diagonal(GateKind kind) {
  return kind == GateKind::RZ || kind == GateKind::CZ || kind == GateKind::CRZ ||
         kind == GateKind::MultiRZ;
}

bool is_rotation(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRX:
    case GateKind::CRZ:
    case GateKind::MultiRZ:
      return true;
    default:
      return false;
  }
}

bool is_controlled_rotation(GateKind kind) {
  return kind == GateKind::CRX || kind == GateKind::CRZ;
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::U3: return "U3";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRZ: return "CRZ";
    case GateKind::MultiRZ: return "MultiRZ";
  }
  return "?";
}

Gate Gate::make(GateKind kind, std::span<const double> params,
                std::span<const int> wires) {
  if (static_cast<int>(params.size()) != param_arity(kind)) {
    throw GateError(std::string(to_string(kind)) + " expects " +
                    std::to_string(param_arity(kind)) + " parameters, got " +
                    std::to_string(params.size()));
  }
  if (static_cast<int>(wires.size()) != wire_arity(kind)) {
    throw GateError(std::string(to_string(kind)) + " expects " +
                    std::to_string(wire_arity(kind)) + " wires, got " +
                    std::to_string(wires.size()));
  }
  Gate g;
  g.kind = kind;
  for (std::size_t i = 0; i < params.size(); ++i) g.params[i] = params[i];
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (wires[i] < 0 || wires[i] >= kMaxQubits) {
      throw GateError(std::string(to_string(kind)) + ": invalid wire " +
                      std::to_string(wires[i]));
    }
    g.wires[i] = wires[i];
  }
  if (wires.size() == 2 && wires[0] == wires[1]) {
    throw GateError(std::string(to_string(kind)) + ": wire collision on " +
                    std::to_string(wires[0]));
  }
  return g;
}

Gate Gate::h(int q) { return make(GateKind::H, {}, std::array{q}); }
Gate Gate::rx(int q, double t) { return make(GateKind::RX, std::array{t}, std::array{q}); }
Gate Gate::ry(int q, double t) { return make(GateKind::RY, std::array{t}, std::array{q}); }
Gate Gate::rz(int q, double t) { return make(GateKind::RZ, std::array{t}, std::array{q}); }
Gate Gate::u3(int q, double theta, double phi, double lambda) {
  return make(GateKind::U3, std::array{theta, phi, lambda}, std::array{q});
}
Gate Gate::cnot(int c, int t) { return make(GateKind::CNOT, {}, std::array{c, t}); }
Gate Gate::cz(int a, int b) { return make(GateKind::CZ, {}, std::array{a, b}); }
Gate Gate::crx(int c, int t, double theta) {
  return make(GateKind::CRX, std::array{theta}, std::array{c, t});
}
Gate Gate::crz(int c, int t, double theta) {
  return make(GateKind::CRZ, std::array{theta}, std::array{c, t});
}
Gate Gate::multi_rz(int a, int b, double theta) {
  return make(GateKind::MultiRZ, std::array{theta}, std::array{a, b});
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::CZ:
      break;
    case GateKind::U3:
      g.params = {-params[0], -params[2], -params[1]};
      break;
    default:
      g.params[0] = -params[0];
      break;
  }
  return g;
}

StateVector StateVector::zero(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n_qubits) +
                      " outside 1.." + std::to_string(kMaxQubits));
  }
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  amps[0] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n_qubits) +
                      " outside 1.." + std::to_string(kMaxQubits));
  }
  if (amplitudes.size() != (std::size_t{1} << n_qubits)) {
    throw DimensionError("amplitude count " + std::to_string(amplitudes.size()) +
                         " does not match 2^" + std::to_string(n_qubits));
  }
  return StateVector(n_qubits, std::move(amplitudes));
}

void StateVector::apply(const Gate& g) {
  check_wires(g, n_qubits_);
  const int w0 = g.wires[0];
  const int w1 = g.wires[1];
  const double half = g.params[0] / 2.0;
  switch (g.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      apply_real_1q(amps_, w0, r, r, r, -r);
      break;
    }
    case GateKind::RX:
      apply_rx_1q(amps_, w0, std::cos(half), std::sin(half));
      break;
    case GateKind::RY: {
      const double c = std::cos(half), s = std::sin(half);
      apply_real_1q(amps_, w0, c, -s, s, c);
      break;
    }
    case GateKind::RZ:
      apply_phase_1q(amps_, w0, std::polar(1.0, -half), std::polar(1.0, half));
      break;
    case GateKind::U3: {
      const double c = std::cos(g.params[0] / 2.0), s = std::sin(g.params[0] / 2.0);
      const double phi = g.params[1], lambda = g.params[2];
      apply_matrix_1q(amps_, w0,
                      {Complex(c, 0.0), -std::polar(s, lambda), std::polar(s, phi),
                       std::polar(c, phi + lambda)});
      break;
    }
    case GateKind::CNOT:
      apply_cnot(amps_, w0, w1);
      break;
    case GateKind::CZ:
      apply_cz(amps_, w0, w1);
      break;
    case GateKind::CRX: {
      const double c = std::cos(half), s = std::sin(half);
      apply_controlled_1q(amps_, w0, w1,
                          {Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0)});
      break;
    }
    case GateKind::CRZ:
      apply_controlled_phase(amps_, w0, w1, std::polar(1.0, -half), std::polar(1.0, half));
      break;
    case GateKind::MultiRZ:
      apply_multi_rz(amps_, w0, w1, g.params[0]);
      break;
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector init_zero(int n_qubits) { return StateVector::zero(n_qubits); }

StateVector apply_gate(StateVector state, const Gate& gate) {
  state.apply(gate);
  return state;
}

QubitProbabilities qubit_probabilities(const StateVector& state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits()) {
    throw ConfigError("qubit index " + std::to_string(qubit) + " out of range for " +
                      std::to_string(state.n_qubits()) + " qubits");
  }
  const auto amps = state.amplitudes();
  const std::size_t half = amps.size() / 2;
  const std::size_t bit = std::size_t{1} << qubit;
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = insert_zero_bit(k, qubit);
    p0 += std::norm(amps[i0]);
    p1 += std::norm(amps[i0 | bit]);
  }
  return {p0, p1};
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("inner product of " + std::to_string(a.n_qubits()) +
                         "- and " + std::to_string(b.n_qubits()) + "-qubit states");
  }
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += cconj_mul(x[i], y[i]);
  return s;
}

Complex generator_overlap(const StateVector& bra, const StateVector& ket,
                          const Gate& g) {
  if (bra.n_qubits() != ket.n_qubits()) {
    throw DimensionError("generator overlap on mismatched registers");
  }
  check_wires(g, ket.n_qubits());
  const auto x = bra.amplitudes();
  const auto y = ket.amplitudes();
  Complex s = 0.0;
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: {
      const int q = g.wires[0];
      const std::size_t bit = std::size_t{1} << q;
      for (std::size_t k = 0; k < x.size() / 2; ++k) {
        const std::size_t i0 = insert_zero_bit(k, q);
        const std::size_t i1 = i0 | bit;
        if (g.kind == GateKind::RX) {
          s += cconj_mul(x[i0], y[i1]) + cconj_mul(x[i1], y[i0]);
        } else if (g.kind == GateKind::RY) {
          s += Complex(0, -1) * cconj_mul(x[i0], y[i1]) + Complex(0, 1) * cconj_mul(x[i1], y[i0]);
        } else {
          s += cconj_mul(x[i0], y[i0]) - cconj_mul(x[i1], y[i1]);
        }
      }
      break;
    }
    case GateKind::CRX:
    case GateKind::CRZ: {
      const int c = g.wires[0], t = g.wires[1];
      const std::size_t cbit = std::size_t{1} << c;
      const std::size_t tbit = std::size_t{1} << t;
      for (std::size_t k = 0; k < x.size() / 4; ++k) {
        const std::size_t i0 = insert_two_zero_bits(k, c, t) | cbit;
        const std::size_t i1 = i0 | tbit;
        if (g.kind == GateKind::CRX) {
          s += cconj_mul(x[i0], y[i1]) + cconj_mul(x[i1], y[i0]);
        } else {
          s += cconj_mul(x[i0], y[i0]) - cconj_mul(x[i1], y[i1]);
        }
      }
      break;
    }
    case GateKind::MultiRZ: {
      const int a = g.wires[0], b = g.wires[1];
      for (std::size_t i = 0; i < x.size(); ++i) {
        const bool parity = (((i >> a) ^ (i >> b)) & 1U) != 0;
        const Complex term = cconj_mul(x[i], y[i]);
        s += parity ? -term : term;
      }
      break;
    }
    default:
      throw GateError(std::string(to_string(g.kind)) + " has no single rotation generator");
  }
  return s;
}

Matrix4 identity4() {
  Matrix4 m{};
  for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(5 * i)] = 1.0;
  return m;
}

Matrix4 matmul4(const Matrix4& x, const Matrix4& y) {
  Matrix4 out{};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) {
      const Complex xv = x[static_cast<std::size_t>(4 * r + k)];
      if (xv == Complex(0.0)) continue;
      for (int c = 0; c < 4; ++c)
        out[static_cast<std::size_t>(4 * r + c)] += cmul(xv, y[static_cast<std::size_t>(4 * k + c)]);
    }
  return out;
}

Matrix4 adjoint4(const Matrix4& m) {
  Matrix4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out[static_cast<std::size_t>(4 * r + c)] = std::conj(m[static_cast<std::size_t>(4 * c + r)]);
  return out;
}

Matrix4 local_matrix(const Gate& gate) {
  // Column alpha is the gate applied to basis state alpha of a 2-qubit register.
  Matrix4 m{};
  for (std::size_t col = 0; col < 4; ++col) {
    std::vector<Complex> amps(4);
    amps[col] = 1.0;
    StateVector s = StateVector::from_amplitudes(2, std::move(amps));
    s.apply(gate);
    for (std::size_t row = 0; row < 4; ++row) m[4 * row + col] = s[row];
  }
  return m;
}

Matrix4 local_generator(const Gate& gate) {
  if (!is_rotation(gate.kind)) {
    throw GateError(std::string(to_string(gate.kind)) + " has no single rotation generator");
  }
  for (int w = 0; w < gate.num_wires(); ++w) {
    if (gate.wires[w] < 0 || gate.wires[w] > 1) throw GateError("local generator needs wires 0/1");
  }
  Matrix4 m{};
  const bool controlled = is_controlled_rotation(gate.kind);
  const int target = controlled ? gate.wires[1] : gate.wires[0];
  for (std::size_t col = 0; col < 4; ++col) {
    if (controlled && ((col >> gate.wires[0]) & 1U) == 0) continue;
    const std::size_t bit = (col >> target) & 1U;
    const std::size_t flipped = col ^ (std::size_t{1} << target);
    switch (gate.kind) {
      case GateKind::RX:
      case GateKind::CRX:
        m[4 * flipped + col] = 1.0;
        break;
      case GateKind::RY:
        m[4 * flipped + col] = bit ? Complex(0, -1) : Complex(0, 1);
        break;
      case GateKind::RZ:
      case GateKind::CRZ:
        m[4 * col + col] = bit ? -1.0 : 1.0;
        break;
      case GateKind::MultiRZ: {
        const bool parity = (((col >> gate.wires[0]) ^ (col >> gate.wires[1])) & 1U) != 0;
        m[4 * col + col] = parity ? -1.0 : 1.0;
        break;
      }
      default:
        break;
    }
  }
  return m;
}

namespace {

inline void local_indices(std::size_t k, int a, int b, std::size_t (&idx)[4]) {
  const std::size_t base = insert_two_zero_bits(k, a, b);
  const std::size_t abit = std::size_t{1} << a;
  const std::size_t bbit = std::size_t{1} << b;
  idx[0] = base;
  idx[1] = base | abit;
  idx[2] = base | bbit;
  idx[3] = base | abit | bbit;
}

inline void matvec4(const Matrix4& m, const Complex (&in)[4], Complex (&out)[4]) {
  for (int r = 0; r < 4; ++r) {
    const std::size_t o = static_cast<std::size_t>(4 * r);
    out[r] = cmul(m[o], in[0]) + cmul(m[o + 1], in[1]) + cmul(m[o + 2], in[2]) +
             cmul(m[o + 3], in[3]);
  }
}

void check_pair(const StateVector& s, int a, int b) {
  if (a < 0 || b < 0 || a >= s.n_qubits() || b >= s.n_qubits() || a == b) {
    throw GateError("invalid wire pair (" + std::to_string(a) + ", " + std::to_string(b) +
                    ") for " + std::to_string(s.n_qubits()) + " qubits");
  }
}

}  // namespace

void apply_matrix4(StateVector& state, int a, int b, const Matrix4& m) {
  check_pair(state, a, b);
  auto amps = state.amplitudes();
  const std::size_t quarter = amps.size() / 4;
  std::size_t idx[4];
  Complex in[4], out[4];
  for (std::size_t k = 0; k < quarter; ++k) {
    local_indices(k, a, b, idx);
    for (int j = 0; j < 4; ++j) in[j] = amps[idx[j]];
    matvec4(m, in, out);
    for (int j = 0; j < 4; ++j) amps[idx[j]] = out[j];
  }
}

Matrix4 adjoint_step4(StateVector& ket, StateVector& bra, int a, int b, const Matrix4& m) {
  check_pair(ket, a, b);
  if (ket.n_qubits() != bra.n_qubits()) throw DimensionError("adjoint step on mismatched registers");
  auto x = ket.amplitudes();
  auto y = bra.amplitudes();
  const std::size_t quarter = x.size() / 4;
  Matrix4 r{};
  std::size_t idx[4];
  Complex kin[4], kout[4], bin[4], bout[4];
  for (std::size_t k = 0; k < quarter; ++k) {
    local_indices(k, a, b, idx);
    for (int j = 0; j < 4; ++j) {
      kin[j] = x[idx[j]];
      bin[j] = y[idx[j]];
    }
    matvec4(m, kin, kout);
    matvec4(m, bin, bout);
    for (int al = 0; al < 4; ++al)
      for (int be = 0; be < 4; ++be)
        r[static_cast<std::size_t>(4 * al + be)] += cconj_mul(bin[be], kout[al]);
    for (int j = 0; j < 4; ++j) {
      x[idx[j]] = kout[j];
      y[idx[j]] = bout[j];
    }
  }
  return r;
}

Complex projector_one_overlap(const StateVector& bra, const StateVector& ket, int qubit) {
  if (bra.n_qubits() != ket.n_qubits()) {
    throw DimensionError("projector overlap on mismatched registers");
  }
  if (qubit < 0 || qubit >= ket.n_qubits()) {
    throw ConfigError("qubit index " + std::to_string(qubit) + " out of range");
  }
  const auto x = bra.amplitudes();
  const auto y = ket.amplitudes();
  const std::size_t bit = std::size_t{1} << qubit;
  Complex s = 0.0;
  for (std::size_t k = 0; k < x.size() / 2; ++k) {
    const std::size_t i1 = insert_zero_bit(k, qubit) | bit;
    s += cconj_mul(x[i1], y[i1]);
  }
  return s;
}

}  // namespace qdr
