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

#include "qdimred/qnn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qdimred/error.hpp"
#include "qdimred/optim.hpp"
#include "qdimred/rng.hpp"

namespace qdr {

std::string_view to_string(Wiring w) { return w == Wiring::Ladder ? "ladder" : "1d"; }

Wiring parse_wiring(std::string_view name) {
  if (name == "ladder") return Wiring::Ladder;
  if (name == "1d") return Wiring::OneD;
  throw ConfigError("unknown wiring '" + std::string(name) + "'");
}

void validate(const QnnConfig& c) {
  if (c.n_qubits < 1 || c.n_qubits > kMaxQubits) {
    throw ConfigError("QNN width " + std::to_string(c.n_qubits) + " outside 1.." +
                      std::to_string(kMaxQubits));
  }
  if (c.layers < 1) throw ConfigError("QNN layers must be >= 1");
  if (c.ansatz == AnsatzKind::Pooling) {
    throw ConfigError("Pooling is not a convolution ansatz");
  }
  if (c.n_qubits < 2) throw ConfigError("QNN needs at least 2 qubits for two-qubit blocks");
}

std::vector<std::pair<int, int>> layer_pairs(int n, Wiring wiring) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; 2 * k + 1 < n; ++k) pairs.emplace_back(2 * k, 2 * k + 1);
  for (int k = 0; 2 * k + 2 < n; ++k) pairs.emplace_back(2 * k + 1, 2 * k + 2);
  if (wiring == Wiring::Ladder && n >= 3) pairs.emplace_back(n - 1, 0);
  return pairs;
}

std::vector<std::vector<std::pair<int, int>>> pooling_stages(int n) {
  std::vector<std::vector<std::pair<int, int>>> stages;
  std::vector<int> active(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;
  const bool power_of_two = n > 0 && (n & (n - 1)) == 0;
  while (active.size() > 1) {
    std::vector<std::pair<int, int>> stage;
    std::vector<int> next;
    for (std::size_t k = 0; k < active.size(); k += 2) {
      next.push_back(active[k]);
      if (k + 1 < active.size()) stage.emplace_back(active[k + 1], active[k]);
    }
    stages.push_back(std::move(stage));
    active = std::move(next);
    if (!power_of_two) break;
  }
  return stages;
}

std::size_t param_count(const QnnConfig& c) {
  validate(c);
  std::size_t n = static_cast<std::size_t>(c.layers) * layer_pairs(c.n_qubits, c.wiring).size() *
                  static_cast<std::size_t>(ansatz_param_count(c.ansatz));
  if (c.pooling) {
    for (const auto& stage : pooling_stages(c.n_qubits)) {
      n += stage.size() * static_cast<std::size_t>(ansatz_param_count(AnsatzKind::Pooling));
    }
  }
  return n;
}

QnnParams init_params(const QnnConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  QnnParams p;
  p.values.resize(param_count(config));
  for (double& v : p.values) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

namespace {

BoundBlock make_block(AnsatzKind kind, int a, int b, int offset) {
  BoundBlock block{a, b, {}};
  for (const TemplateGate& t : block_template(kind)) {
    if (t.kind == GateKind::U3) {
      // U3(theta, phi, lambda) = RZ(phi) RY(theta) RZ(lambda) up to phase.
      block.gates.push_back({Gate::rz(t.w0, 0.0), offset + t.slots[2]});
      block.gates.push_back({Gate::ry(t.w0, 0.0), offset + t.slots[0]});
      block.gates.push_back({Gate::rz(t.w0, 0.0), offset + t.slots[1]});
      continue;
    }
    const int param = t.slots[0] >= 0 ? offset + t.slots[0] : -1;
    std::vector<double> zero(static_cast<std::size_t>(param_arity(t.kind)), 0.0);
    Gate g = wire_arity(t.kind) == 1 ? Gate::make(t.kind, zero, std::array{t.w0})
                                     : Gate::make(t.kind, zero, std::array{t.w0, t.w1});
    block.gates.push_back({g, param});
  }
  return block;
}

Gate bind_gate(const BoundOp& op, std::span<const double> params) {
  Gate g = op.gate;
  if (op.param >= 0) g.params[0] = params[static_cast<std::size_t>(op.param)];
  return g;
}

Complex trace_product(const Matrix4& a, const Matrix4& r) {
  Complex t = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) t += a[4 * i + k] * r[4 * k + i];
  return t;
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

double bce_derivative(double p1, int label) {
  if (p1 <= kProbClamp || p1 >= 1.0 - kProbClamp) return 0.0;
  return label == 1 ? -1.0 / p1 : 1.0 / (1.0 - p1);
}

void check_batch(const Matrix& X, std::span<const int> y) {
  if (X.rows() == 0 || static_cast<std::size_t>(X.rows()) != y.size()) {
    throw UsageError("batch needs matching non-zero sample and label counts (" +
                     std::to_string(X.rows()) + " vs " + std::to_string(y.size()) + ")");
  }
  for (int label : y) {
    if (label != 0 && label != 1) throw UsageError("QNN labels must be 0 or 1");
  }
}

}  // namespace

QnnCircuit::QnnCircuit(const QnnConfig& config) : config_(config) {
  validate(config_);
  const int pc = ansatz_param_count(config_.ansatz);
  int offset = 0;
  const auto pairs = layer_pairs(config_.n_qubits, config_.wiring);
  for (int l = 0; l < config_.layers; ++l) {
    for (const auto& [a, b] : pairs) {
      blocks_.push_back(make_block(config_.ansatz, a, b, offset));
      offset += pc;
    }
  }
  if (config_.pooling) {
    for (const auto& stage : pooling_stages(config_.n_qubits)) {
      for (const auto& [control, survivor] : stage) {
        blocks_.push_back(make_block(AnsatzKind::Pooling, control, survivor, offset));
        offset += ansatz_param_count(AnsatzKind::Pooling);
      }
    }
  }
  n_params_ = static_cast<std::size_t>(offset);
}

std::vector<BoundOp> QnnCircuit::ops() const {
  std::vector<BoundOp> out;
  for (const BoundBlock& block : blocks_) {
    const std::array<int, 2> wires{block.a, block.b};
    for (BoundOp op : block.gates) {
      for (int w = 0; w < op.gate.num_wires(); ++w) {
        op.gate.wires[static_cast<std::size_t>(w)] =
            wires[static_cast<std::size_t>(op.gate.wires[static_cast<std::size_t>(w)])];
      }
      out.push_back(op);
    }
  }
  return out;
}

void QnnCircuit::check_params(std::span<const double> params) const {
  if (params.size() != n_params_) {
    throw DimensionError("QNN expects " + std::to_string(n_params_) + " parameters, got " +
                         std::to_string(params.size()));
  }
}

std::vector<Matrix4> QnnCircuit::block_matrices(std::span<const double> params) const {
  check_params(params);
  std::vector<Matrix4> out;
  out.reserve(blocks_.size());
  for (const BoundBlock& block : blocks_) {
    Matrix4 m = identity4();
    for (const BoundOp& op : block.gates) m = matmul4(local_matrix(bind_gate(op, params)), m);
    out.push_back(m);
  }
  return out;
}

StateVector QnnCircuit::run(std::span<const double> params, std::span<const double> x) const {
  const auto mats = block_matrices(params);
  StateVector s = embed(x, config_.n_qubits, config_.embedding);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    apply_matrix4(s, blocks_[k].a, blocks_[k].b, mats[k]);
  }
  return s;
}

double QnnCircuit::forward(std::span<const double> params, std::span<const double> x) const {
  return qubit_probabilities(run(params, x), 0).p1;
}

double QnnCircuit::forward_and_gradient(std::span<const double> params,
                                        std::span<const double> x, double weight,
                                        std::span<double> grad) const {
  check_params(params);
  if (grad.size() != n_params_) throw DimensionError("gradient buffer has the wrong length");
  // Per-block gate matrices and their products.
  std::vector<std::vector<Matrix4>> gates(blocks_.size());
  std::vector<Matrix4> mats(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    Matrix4 m = identity4();
    for (const BoundOp& op : blocks_[k].gates) {
      gates[k].push_back(local_matrix(bind_gate(op, params)));
      m = matmul4(gates[k].back(), m);
    }
    mats[k] = m;
  }
  StateVector psi = embed(x, config_.n_qubits, config_.embedding);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    apply_matrix4(psi, blocks_[k].a, blocks_[k].b, mats[k]);
  }
  const double p1 = qubit_probabilities(psi, 0).p1;
  if (weight == 0.0) return p1;

  // lambda = Pi_1 psi; walk both states back block by block.
  StateVector lambda = psi;
  {
    auto amps = lambda.amplitudes();
    for (std::size_t i = 0; i < amps.size(); i += 2) amps[i] = 0.0;
  }
  std::vector<Matrix4> prefix, suffix;
  for (std::size_t k = blocks_.size(); k-- > 0;) {
    const BoundBlock& block = blocks_[k];
    const Matrix4 r = adjoint_step4(psi, lambda, block.a, block.b, adjoint4(mats[k]));
    const std::size_t m = block.gates.size();
    // prefix[j] = G_j ... G_0, suffix[j] = G_{m-1} ... G_{j+1}.
    prefix.assign(m, identity4());
    suffix.assign(m, identity4());
    Matrix4 acc = identity4();
    for (std::size_t j = 0; j < m; ++j) {
      acc = matmul4(gates[k][j], acc);
      prefix[j] = acc;
    }
    acc = identity4();
    for (std::size_t j = m; j-- > 0;) {
      suffix[j] = acc;
      acc = matmul4(acc, gates[k][j]);
    }
    for (std::size_t j = 0; j < m; ++j) {
      const BoundOp& op = block.gates[j];
      if (op.param < 0) continue;
      const Matrix4 d = matmul4(suffix[j], matmul4(local_generator(op.gate), prefix[j]));
      // 2 Re <lambda| (-i/2) S P G_j..G_0 |psi_before> = Im Tr(S P Pre R).
      grad[static_cast<std::size_t>(op.param)] += weight * trace_product(d, r).imag();
    }
  }
  return p1;
}

std::vector<double> QnnCircuit::shift_gradient(std::span<const double> params,
                                               std::span<const double> x) const {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double sqrt2 = std::numbers::sqrt2;
  const double c_near = (sqrt2 + 1.0) / (4.0 * sqrt2);
  const double c_far = (sqrt2 - 1.0) / (4.0 * sqrt2);
  std::vector<double> shifted(params.begin(), params.end());
  auto eval = [&](std::size_t p, double delta) {
    shifted[p] = params[p] + delta;
    const double v = forward(shifted, x);
    shifted[p] = params[p];
    return v;
  };
  std::vector<double> grad(n_params_, 0.0);
  for (const BoundOp& op : ops()) {
    if (op.param < 0) continue;
    const auto p = static_cast<std::size_t>(op.param);
    if (is_controlled_rotation(op.gate.kind)) {
      grad[p] += c_near * (eval(p, half_pi) - eval(p, -half_pi)) -
                 c_far * (eval(p, 3.0 * half_pi) - eval(p, -3.0 * half_pi));
    } else {
      grad[p] += 0.5 * (eval(p, half_pi) - eval(p, -half_pi));
    }
  }
  return grad;
}

double forward(const QnnConfig& config, const QnnParams& params, std::span<const double> x) {
  return QnnCircuit(config).forward(params.values, x);
}

double bce(double p1, int label) {
  const double p = clamp_prob(p1);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

double loss(const QnnConfig& config, const QnnParams& params, const Matrix& X,
            std::span<const int> y) {
  check_batch(X, y);
  const QnnCircuit circuit(config);
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    total += bce(circuit.forward(params.values, row_span(X, i)), y[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(X.rows());
}

namespace {

// Mean loss over rows idx and its gradient.
double batch_loss_and_gradient(const QnnCircuit& circuit, std::span<const double> params,
                               const Matrix& X, std::span<const int> y,
                               std::span<const std::size_t> idx, GradientMethod method,
                               std::vector<double>& grad) {
  grad.assign(circuit.num_params(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(idx.size());
  double total = 0.0;
  for (std::size_t i : idx) {
    const auto x = row_span(X, static_cast<Eigen::Index>(i));
    const int label = y[i];
    if (method == GradientMethod::Adjoint) {
      // The loss derivative needs p1 first; a zero-weight pass would
      // double the cost, so scale after the fact instead.
      std::vector<double> g(circuit.num_params(), 0.0);
      const double p1 = circuit.forward_and_gradient(params, x, 1.0, g);
      const double scale = inv_n * bce_derivative(p1, label);
      for (std::size_t k = 0; k < g.size(); ++k) grad[k] += scale * g[k];
      total += bce(p1, label);
    } else {
      const double p1 = circuit.forward(params, x);
      const auto g = circuit.shift_gradient(params, x);
      const double scale = inv_n * bce_derivative(p1, label);
      for (std::size_t k = 0; k < g.size(); ++k) grad[k] += scale * g[k];
      total += bce(p1, label);
    }
  }
  return total * inv_n;
}

}  // namespace

std::vector<double> gradient(const QnnConfig& config, const QnnParams& params, const Matrix& X,
                             std::span<const int> y, GradientMethod method) {
  check_batch(X, y);
  const QnnCircuit circuit(config);
  std::vector<std::size_t> idx(static_cast<std::size_t>(X.rows()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<double> grad;
  batch_loss_and_gradient(circuit, params.values, X, y, idx, method, grad);
  return grad;
}

void validate(const TrainSettings& s) {
  if (s.iterations < 0) throw ConfigError("iterations must be >= 0");
  if (s.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(s.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
}

QnnTrainResult train(const QnnConfig& config, const TrainSettings& settings, const Matrix& X,
                     std::span<const int> y) {
  check_batch(X, y);
  validate(settings);
  const QnnCircuit circuit(config);
  QnnTrainResult result;
  result.params = init_params(config, settings.seed);
  Rng rng(settings.seed ^ 0x9e3779b97f4a7c15ULL);
  Adam adam(circuit.num_params(), {settings.learning_rate});
  const std::size_t n = static_cast<std::size_t>(X.rows());
  const std::size_t batch = std::min(n, static_cast<std::size_t>(settings.batch_size));
  std::vector<double> grad;
  result.loss_history.reserve(static_cast<std::size_t>(settings.iterations));
  for (int it = 0; it < settings.iterations; ++it) {
    auto perm = rng.permutation(n);
    perm.resize(batch);
    const double l = batch_loss_and_gradient(circuit, result.params.values, X, y, perm,
                                              settings.method, grad);
    result.loss_history.push_back(l);
    adam.step(result.params.values, grad);
  }
  return result;
}

std::vector<int> predict(const QnnConfig& config, const QnnParams& params, const Matrix& X) {
  const QnnCircuit circuit(config);
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = circuit.forward(params.values, row_span(X, i)) >= 0.5;
  }
  return out;
}

}  // namespace qdr
