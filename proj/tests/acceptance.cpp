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

// Acceptance checks for the library. Prints one PASS/FAIL line per criterion
// and exits nonzero when any criterion fails.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdimred/dimred.hpp"
#include "qdimred/embedding.hpp"
#include "qdimred/harness.hpp"
#include "qdimred/qkernel.hpp"
#include "qdimred/qnn.hpp"
#include "qdimred/rng.hpp"
#include "qdimred/statevector.hpp"
#include "qdimred/svm.hpp"
#include "qp_oracle.hpp"
#include "support.hpp"
#include "svm_corpus.hpp"

using namespace qdr;
using namespace qdr::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

Outcome simulator_oracle() {
  const auto t0 = Clock::now();
  Rng rng(0xacce0001);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const int n = 1 + static_cast<int>(rng.index(4));
    const int n_gates = 1 + static_cast<int>(rng.index(30));
    std::vector<Gate> gates;
    for (int g = 0; g < n_gates; ++g) gates.push_back(random_gate(rng, n));
    StateVector s = StateVector::zero(n);
    for (const Gate& g : gates) s.apply(g);
    worst = std::max(worst, (to_eigen(s) - dense_run(gates, n, dense_zero(n))).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 10.0,
          fmt("200 circuits, max amplitude error %.3e (tol 1e-10), %.2f s (limit 10 s)", worst, secs)};
}

Outcome parameter_shift() {
  const auto t0 = Clock::now();
  Rng rng(0xacce0002);
  const AnsatzKind conv[] = {AnsatzKind::U_TTN, AnsatzKind::U_9,  AnsatzKind::U_13,
                             AnsatzKind::U_14,  AnsatzKind::U_SO4, AnsatzKind::U_5,
                             AnsatzKind::U_6,   AnsatzKind::U_SU4};
  double worst = 0.0;
  int checked = 0;
  const double h = 1e-5;
  for (AnsatzKind k : conv) {
    for (int n : {4, 6}) {
      // Pooling is on, so every circuit also exercises the Pooling block.
      QnnConfig c;
      c.n_qubits = n;
      c.ansatz = k;
      c.layers = 1;
      c.pooling = true;
      c.embedding = {EmbeddingKind::AngleY};
      const QnnCircuit circuit(c);
      for (int point = 0; point < 20; ++point) {
        const auto p = random_vec(rng, circuit.num_params(), 0, 2 * std::numbers::pi);
        const auto x = random_vec(rng, static_cast<std::size_t>(n), -std::numbers::pi, std::numbers::pi);
        const auto g = circuit.shift_gradient(p, x);
        double diff2 = 0.0, ref2 = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
          auto up = p, down = p;
          up[j] += h;
          down[j] -= h;
          const double fd = (circuit.forward(up, x) - circuit.forward(down, x)) / (2 * h);
          diff2 += (g[j] - fd) * (g[j] - fd);
          ref2 += fd * fd;
        }
        // A vanishing gradient has no meaningful relative error; fall back to absolute.
        const double rel = std::sqrt(diff2) / std::max(std::sqrt(ref2), 1e-3);
        worst = std::max(worst, rel);
        ++checked;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-5 && secs < 60.0,
          fmt("%d points over 9 block kinds at 4 and 6 qubits, max relative error %.3e (tol 1e-5), "
              "%.2f s (limit 60 s)",
              checked, worst, secs)};
}

Outcome gram_validity() {
  Rng rng(0xacce0003);
  const EmbeddingKind kinds[] = {EmbeddingKind::AngleX, EmbeddingKind::AngleY, EmbeddingKind::AngleZ};
  double sym = 0.0, diag = 0.0, min_eig = 1.0;
  for (int t = 0; t < 50; ++t) {
    KernelConfig c;
    c.n_qubits = 1 + static_cast<int>(rng.index(8));
    c.layers = 1 + static_cast<int>(rng.index(3));
    c.embedding = {kinds[rng.index(3)]};
    c.trainable = rng.index(2) == 1;
    const KernelParams p = init_params(c, rng.next_u64());
    const auto m = static_cast<Eigen::Index>(2 + rng.index(19));
    Matrix X(m, c.n_qubits);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Matrix K = gram(c, p.values, X);
    sym = std::max(sym, (K - K.transpose()).cwiseAbs().maxCoeff());
    diag = std::max(diag, (K.diagonal().array() - 1.0).abs().maxCoeff());
    const Matrix Ks = 0.5 * (K + K.transpose());
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Matrix>(Ks).eigenvalues().minCoeff());
  }
  return {sym <= 1e-10 && diag <= 1e-10 && min_eig >= -1e-8,
          fmt("50 Gram matrices, asymmetry %.2e, diagonal error %.2e, min eigenvalue %.3e", sym, diag,
              min_eig)};
}

Outcome svc_oracle() {
  double worst = 0.0;
  int n = 0;
  for (const SvcInstance& inst : small_svc_corpus()) {
    SvcSettings s;
    s.C = inst.C;
    const SvcModel m = fit_precomputed(inst.K, inst.y, s);
    const QpSolution best = brute_force_dual(inst.K, inst.y, inst.C);
    worst = std::max(worst, std::abs(m.dual_objective - best.objective));
    ++n;
  }
  return {worst <= 1e-6, fmt("%d instances, max dual objective gap %.3e (tol 1e-6)", n, worst)};
}

Outcome pca_svd() {
  Rng rng(0xacce0005);
  double proj = 0.0, ortho = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto m = static_cast<Eigen::Index>(20 + rng.index(40));
    const auto f = static_cast<Eigen::Index>(3 + rng.index(14));
    const int d = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(f)));
    Matrix X(m, f);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal() * (1.0 + static_cast<double>(i % f));
    X.rowwise() -= X.colwise().mean();
    const PcaModel pm = fit_pca(X, d);
    const TsvdModel tm = fit_tsvd(X, d);
    const Matrix a = transform(pm, X);
    const Matrix b = X * tm.components;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double plus = (a.col(j) - b.col(j)).cwiseAbs().maxCoeff();
      const double minus = (a.col(j) + b.col(j)).cwiseAbs().maxCoeff();
      proj = std::max(proj, std::min(plus, minus));
    }
    const Matrix gramc = pm.components.transpose() * pm.components;
    ortho = std::max(ortho, (gramc - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  return {proj <= 1e-8 && ortho <= 1e-10,
          fmt("20 centered matrices, max signed projection gap %.3e (tol 1e-8), orthonormality %.3e (tol 1e-10)",
              proj, ortho)};
}

double mean_accuracy(const std::vector<ExperimentResult>& rs, const std::function<bool(const ExperimentConfig&)>& pick,
                     int& found) {
  found = 0;
  double acc = 0.0;
  for (const auto& r : rs) {
    if (pick(r.config)) {
      acc = r.mean.accuracy;
      ++found;
    }
  }
  return acc;
}

struct DefaultRuns {
  std::string csv_a, csv_b;
  std::vector<ExperimentResult> results;
  double secs_a = 0.0, secs_b = 0.0;
};

DefaultRuns run_default_twice(const std::string& dir, std::uint64_t seed, int parallel) {
  DefaultRuns out;
  const Suite s = load_suite(dir + "/default_suite.json");
  auto t0 = Clock::now();
  out.results = run_suite(s, seed, parallel);
  out.secs_a = seconds_since(t0);
  out.csv_a = results_csv(out.results);
  t0 = Clock::now();
  out.csv_b = results_csv(run_suite(s, seed, parallel));
  out.secs_b = seconds_since(t0);
  return out;
}

Outcome qnn_trend(const DefaultRuns& d) {
  int n_none = 0, n_pca = 0;
  const double none = mean_accuracy(d.results, [](const ExperimentConfig& c) {
    return c.model == ModelKind::QNN && !c.reduction && model_width(c) == 16;
  }, n_none);
  const double pca = mean_accuracy(d.results, [](const ExperimentConfig& c) {
    return c.model == ModelKind::QNN && c.reduction && c.reduction->spec.method == ReductionMethod::PCA &&
           model_width(c) == 8;
  }, n_pca);
  if (n_none != 1 || n_pca != 1) return {false, "default suite lacks the no-reduction or PCA->8 experiment"};
  const bool ok = pca - none >= 0.20 && none >= 0.40 && none <= 0.65 && pca >= 0.85 && d.secs_a <= 1800;
  return {ok, fmt("no reduction %.3f (band [0.40, 0.65]), PCA->8 %.3f (>= 0.85), difference %+.3f (>= 0.20), "
                  "%.1f min (limit 30)",
                  none, pca, pca - none, d.secs_a / 60)};
}

Outcome determinism(const DefaultRuns& d) {
  return {d.csv_a == d.csv_b && !d.csv_a.empty(),
          fmt("two default-suite runs, %zu result bytes, %s", d.csv_a.size(),
              d.csv_a == d.csv_b ? "byte-identical" : "DIFFERENT")};
}

struct KernelRuns {
  std::vector<ExperimentResult> results;
  double secs = 0.0;
};

Outcome qsvc_trend(const KernelRuns& k) {
  int n_none = 0, n_ae = 0;
  const double none = mean_accuracy(k.results, [](const ExperimentConfig& c) {
    return c.model == ModelKind::QSVC && !c.reduction && model_width(c) == 8;
  }, n_none);
  const double ae = mean_accuracy(k.results, [](const ExperimentConfig& c) {
    return c.model == ModelKind::QSVC && c.reduction &&
           c.reduction->spec.method == ReductionMethod::Autoencoder && model_width(c) == 4;
  }, n_ae);
  if (n_none != 1 || n_ae != 1) return {false, "kernel suite lacks the 8-qubit or autoencoder->4 QSVC experiment"};
  const bool ok = none - ae >= 0.05 && none >= 0.90 && k.secs <= 1800;
  return {ok, fmt("no reduction %.3f (>= 0.90), autoencoder->4 %.3f, drop %+.3f (>= 0.05), %.1f min (limit 30)",
                  none, ae, none - ae, k.secs / 60)};
}

Outcome svc_proximity(const KernelRuns& k) {
  std::istringstream in(comparison_csv(k.results));
  std::string line;
  std::getline(in, line);
  int total = 0, close = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    const double abs_delta = std::stod(line.substr(line.rfind(',') + 1));
    worst = std::max(worst, abs_delta);
    ++total;
    close += abs_delta <= 0.10;
  }
  const bool ok = total > 0 && close >= 0.8 * total;
  return {ok, fmt("%d of %d matched settings within 0.10 (need 80%%), largest gap %.3f", close, total, worst)};
}

Outcome cnn_baseline(const std::string& dir, std::uint64_t seed, int parallel) {
  const auto t0 = Clock::now();
  const auto results = run_suite(load_suite(dir + "/cnn_suite.json"), seed, parallel);
  const double secs = seconds_since(t0);
  std::set<DatasetKind> passed, seen;
  std::string detail;
  for (const auto& r : results) {
    if (r.config.model != ModelKind::CNN || r.config.reduction) continue;
    seen.insert(r.config.dataset.kind);
    if (r.mean.accuracy >= 0.95) passed.insert(r.config.dataset.kind);
    detail += fmt("%s %.3f, ", std::string(to_string(r.config.dataset.kind)).c_str(), r.mean.accuracy);
  }
  const bool both = seen.count(DatasetKind::Linear) && seen.count(DatasetKind::Image4x4);
  const bool ok = both && passed == seen && secs <= 300;
  return {ok, detail + fmt("threshold 0.95, %.1f s (limit 300 s)", secs)};
}

Outcome angle_z() {
  Rng rng(0xacce000a);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng.index(8));
    const auto x = random_vec(rng, static_cast<std::size_t>(n), -10, 10);
    const StateVector s = embed(x, n, {EmbeddingKind::AngleZ});
    const auto a = s.amplitudes();
    worst = std::max(worst, std::abs(std::norm(a[0]) - 1.0));
    for (std::size_t k = 1; k < a.size(); ++k) worst = std::max(worst, std::norm(a[k]));
  }
  return {worst <= 1e-12, fmt("100 inputs, max probability deviation from |0...0> %.3e (tol 1e-12)", worst)};
}

Outcome tsne_objective() {
  int lower = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(0xacce000c + seed);
    Matrix X(40, 16);
    for (Eigen::Index i = 0; i < 40; ++i)
      for (Eigen::Index j = 0; j < 16; ++j) X(i, j) = (i < 20 ? 0.0 : 10.0) + rng.normal();
    TsneSettings s;
    s.perplexity = 10.0;
    const TsneResult r = tsne_embed(X, 2, s, seed);
    const double at100 = r.kl_history.at(99), last = r.kl_history.back();
    lower += last < at100;
    worst_ratio = std::max(worst_ratio, last / at100);
  }
  return {lower == 10, fmt("%d of 10 runs end below their iteration-100 KL, worst final/iter100 ratio %.3f",
                           lower, worst_ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdimred acceptance checks"};
  std::string config_dir = QDIMRED_CONFIG_DIR;
  std::uint64_t seed = 2024;
  int parallel = 1;
  std::vector<int> only;
  app.add_option("--configs", config_dir, "directory holding the committed suites");
  app.add_option("--seed", seed, "master seed for the suite runs");
  app.add_option("--parallel", parallel, "worker threads for suite runs")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::set<int> wanted = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}
                                            : std::set<int>(only.begin(), only.end());
  const char* names[] = {"",
                         "simulator oracle equivalence",
                         "parameter-shift correctness",
                         "Gram validity",
                         "SVC oracle equivalence",
                         "PCA-SVD consistency",
                         "QNN reduction trend",
                         "QSVC degradation trend",
                         "classical-quantum SVC proximity",
                         "CNN baseline",
                         "angle-Z diagonality",
                         "end-to-end determinism",
                         "t-SNE objective"};

  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& check) {
    if (!wanted.count(id)) return;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", names[id], o.detail.c_str());
    std::fflush(stdout);
  };

  // Suite runs are shared between criteria and computed on first use.
  std::optional<DefaultRuns> defaults;
  std::optional<KernelRuns> kernels;
  auto default_runs = [&]() -> const DefaultRuns& {
    if (!defaults) defaults = run_default_twice(config_dir, seed, parallel);
    return *defaults;
  };
  auto kernel_runs = [&]() -> const KernelRuns& {
    if (!kernels) {
      const auto t0 = Clock::now();
      KernelRuns k;
      k.results = run_suite(load_suite(config_dir + "/kernel_suite.json"), seed, parallel);
      k.secs = seconds_since(t0);
      kernels = std::move(k);
    }
    return *kernels;
  };

  report(1, simulator_oracle);
  report(2, parameter_shift);
  report(3, gram_validity);
  report(4, svc_oracle);
  report(5, pca_svd);
  report(6, [&] { return qnn_trend(default_runs()); });
  report(7, [&] { return qsvc_trend(kernel_runs()); });
  report(8, [&] { return svc_proximity(kernel_runs()); });
  report(9, [&] { return cnn_baseline(config_dir, seed, parallel); });
  report(10, angle_z);
  report(11, [&] { return determinism(default_runs()); });
  report(12, tsne_objective);

  std::printf("%d of %zu criteria failed\n", failures, wanted.size());
  return failures == 0 ? 0 : 1;
}
