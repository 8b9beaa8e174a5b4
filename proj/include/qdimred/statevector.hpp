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

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qdr {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 16;

enum class GateKind { H, RX, RY, RZ, U3, CNOT, CZ, CRX, CRZ, MultiRZ };

int param_arity(GateKind kind);
int wire_arity(GateKind kind);
bool is_diagonal(GateKind kind);
// True for gates of the form exp(-i theta P / 2) with a single generator P.
bool is_rotation(GateKind kind);
// Rotations whose generator is |1><1| (x) P: their shift rule needs four terms.
bool is_controlled_rotation(GateKind kind);
std::string_view to_string(GateKind kind);

// A gate instance: kind, angles in radians, and wires. For controlled kinds
// the control wire is listed first.
struct Gate {
  GateKind kind = GateKind::H;
  std::array<double, 3> params{};
  std::array<int, 2> wires{};

  // Validating constructor; throws GateError on arity mismatch or wire
  // collision.
  static Gate make(GateKind kind, std::span<const double> params,
                   std::span<const int> wires);

  static Gate h(int q);
  static Gate rx(int q, double theta);
  static Gate ry(int q, double theta);
  static Gate rz(int q, double theta);
  static Gate u3(int q, double theta, double phi, double lambda);
  static Gate cnot(int control, int target);
  static Gate cz(int a, int b);
  static Gate crx(int control, int target, double theta);
  static Gate crz(int control, int target, double theta);
  static Gate multi_rz(int a, int b, double theta);

  int num_params() const { return param_arity(kind); }
  int num_wires() const { return wire_arity(kind); }

  // The exact inverse gate. U3(t, p, l)^-1 = U3(-t, -l, -p).
  Gate inverse() const;
};

// Pure n-qubit register. Amplitude index bit k is the state of qubit k
// (qubit 0 is the least significant bit).
class StateVector {
 public:
  // |0...0> on n qubits; throws ConfigError outside 1..kMaxQubits.
  static StateVector zero(int n_qubits);
  // Takes ownership of amplitudes; length must be 2^n_qubits. Not normalized.
  static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  void apply(const Gate& gate);
  double norm() const;

 private:
  StateVector(int n_qubits, std::vector<Complex> amps)
      : n_qubits_(n_qubits), amps_(std::move(amps)) {}

  int n_qubits_ = 0;
  std::vector<Complex> amps_;
};

struct QubitProbabilities {
  double p0 = 0.0;
  double p1 = 0.0;
};

StateVector init_zero(int n_qubits);
StateVector apply_gate(StateVector state, const Gate& gate);
QubitProbabilities qubit_probabilities(const StateVector& state, int qubit);
// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

// <bra| P |ket> where P is the generator of a rotation gate, i.e. the gate is
// exp(-i theta P / 2). Used by adjoint differentiation; throws GateError for
// non-rotation kinds.
Complex generator_overlap(const StateVector& bra, const StateVector& ket,
                          const Gate& gate);

// Dense operator on two wires. Row-major; local basis index is
// bit(a) + 2 * bit(b).
using Matrix4 = std::array<Complex, 16>;

Matrix4 identity4();
Matrix4 matmul4(const Matrix4& x, const Matrix4& y);
Matrix4 adjoint4(const Matrix4& m);
// Local matrix of a gate whose wires are 0 and/or 1 (a 2-qubit register).
Matrix4 local_matrix(const Gate& gate);
// Local matrix of the generator P of a rotation gate on wires 0/1.
Matrix4 local_generator(const Gate& gate);

void apply_matrix4(StateVector& state, int a, int b, const Matrix4& m);

// One backward step of adjoint differentiation through a two-qubit operator
// B on wires (a, b): ket <- m ket and bra <- m bra with m = B^dagger, and
// returns R with R[alpha][beta] = sum over the other wires of
// ket_new[alpha] * conj(bra_old[beta]). Then <bra_old| M |ket_new> = Tr(M R).
Matrix4 adjoint_step4(StateVector& ket, StateVector& bra, int a, int b, const Matrix4& m);

// <bra| Pi_1(qubit) |ket>: overlap restricted to basis states with the qubit
// set.
Complex projector_one_overlap(const StateVector& bra, const StateVector& ket,
                              int qubit);

}  // namespace qdr
