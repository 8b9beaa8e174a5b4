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

#include "qdimred/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdimred/error.hpp"

namespace qdr {
namespace {

// Platt's SMO with a cached G_i = sum_j a_j y_j K_ij, so E_i = G_i + b - y_i.
class Smo {
 public:
  Smo(const Matrix& K, std::span<const int> y, const SvcSettings& s)
      : K_(K), y_(y.begin(), y.end()), C_(s.C), tol_(s.tol),
        a_(y.size(), 0.0), g_(y.size(), 0.0) {}

  bool solve(int max_passes, int& passes) {
    const std::size_t m = y_.size();
    bool examine_all = true;
    std::size_t changed = 0;
    passes = 0;
    while (changed > 0 || examine_all) {
      if (passes >= max_passes) return false;
      ++passes;
      changed = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (examine_all || is_free(i)) changed += examine(i);
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return polish(kPolishSteps);
  }

  // The heuristic loop above can stop with a violator it cannot move. Finish
  // on the maximal violating pair until every bias bound is within tol of
  // the others, so the final bias satisfies all KKT conditions.
  bool polish(int max_steps) {
    for (int it = 0; it < max_steps; ++it) {
      std::size_t lo = 0, up = 0;
      double t_lo = -std::numeric_limits<double>::infinity();
      double t_up = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < y_.size(); ++i) {
        const double t = y_[i] - g_[i];
        if (bounds_below(i) && t > t_lo) {
          t_lo = t;
          lo = i;
        }
        if (bounds_above(i) && t < t_up) {
          t_up = t;
          up = i;
        }
      }
      if (t_lo - t_up <= polish_tol_) return true;
      if (!step(lo, up)) return false;
    }
    return false;
  }

  // Final bias: mean over free vectors, else the midpoint of the feasible
  // interval implied by the bound ones.
  double final_bias() const {
    double sum = 0.0;
    std::size_t n_free = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < y_.size(); ++i) {
      const double target = y_[i] - g_[i];  // b that puts y_i f_i exactly at 1
      if (is_free(i)) {
        sum += target;
        ++n_free;
      } else if ((a_[i] <= 0.0) == (y_[i] > 0)) {
        lo = std::max(lo, target);  // y f >= 1 needs b above for +1 at 0, -1 at C
      } else {
        hi = std::min(hi, target);
      }
    }
    if (n_free > 0) return sum / static_cast<double>(n_free);
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return 0.0;
  }

  const std::vector<double>& alphas() const { return a_; }
  const std::vector<double>& g() const { return g_; }

 private:
  double snap(double a) const {
    if (a < kEps * C_) return 0.0;
    if (a > C_ - kEps * C_) return C_;
    return a;
  }
  bool is_free(std::size_t i) const { return a_[i] > 0.0 && a_[i] < C_; }
  double error(std::size_t i) const { return g_[i] + b_ - y_[i]; }
  // Sample i requires b >= y_i - g_i (below) or b <= y_i - g_i (above).
  bool bounds_below(std::size_t i) const {
    return is_free(i) || (a_[i] <= 0.0 ? y_[i] > 0 : y_[i] < 0);
  }
  bool bounds_above(std::size_t i) const {
    return is_free(i) || (a_[i] <= 0.0 ? y_[i] < 0 : y_[i] > 0);
  }

  std::size_t examine(std::size_t i2) {
    const double y2 = y_[i2];
    const double a2 = a_[i2];
    const double e2 = error(i2);
    const double r2 = e2 * y2;
    if (!((r2 < -tol_ && a2 < C_) || (r2 > tol_ && a2 > 0.0))) return 0;

    const std::size_t m = y_.size();
    std::size_t best = m;
    double best_gap = -1.0;
    std::size_t n_free = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_free(i)) continue;
      ++n_free;
      const double gap = std::abs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (n_free > 1 && best < m && step(best, i2)) return 1;
    for (std::size_t i = 0; i < m; ++i)
      if (is_free(i) && step(i, i2)) return 1;
    for (std::size_t i = 0; i < m; ++i)
      if (step(i, i2)) return 1;
    return 0;
  }

  bool step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const auto e1i = static_cast<Eigen::Index>(i1);
    const auto e2i = static_cast<Eigen::Index>(i2);
    const double a1 = a_[i1], a2 = a_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double E1 = error(i1), E2 = error(i2);
    const double s = y1 * y2;
    double L, H;
    if (y1 != y2) {
      L = std::max(0.0, a2 - a1);
      H = std::min(C_, C_ + a2 - a1);
    } else {
      L = std::max(0.0, a1 + a2 - C_);
      H = std::min(C_, a1 + a2);
    }
    if (L >= H) return false;
    const double k11 = K_(e1i, e1i), k12 = K_(e1i, e2i), k22 = K_(e2i, e2i);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2n;
    if (eta > 0.0) {
      a2n = std::clamp(a2 + y2 * (E1 - E2) / eta, L, H);
    } else {
      // Objective along the constraint line at both ends.
      auto objective_at = [&](double a2x) {
        const double a1x = a1 + s * (a2 - a2x);
        const double d1 = a1x - a1, d2 = a2x - a2;
        // Change in sum a - 1/2 a'Qa relative to the current point.
        return d1 + d2 - (y1 * d1 * g_[i1] + y2 * d2 * g_[i2]) -
               0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * s * d1 * d2 * k12);
      };
      const double lo = objective_at(L), hi = objective_at(H);
      if (lo > hi + kEps) {
        a2n = L;
      } else if (hi > lo + kEps) {
        a2n = H;
      } else {
        return false;
      }
    }
    if (std::abs(a2n - a2) < kEps * (a2n + a2 + kEps)) return false;
    double a1n = a1 + s * (a2 - a2n);
    a1n = std::clamp(a1n, 0.0, C_);
    // Round-off must not leave a value a hair inside the box, where it would
    // count as free but could never move.
    a1n = snap(a1n);
    a2n = snap(a2n);

    const double d1 = y1 * (a1n - a1);
    const double d2 = y2 * (a2n - a2);
    const double b1 = b_ - E1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - E2 - d1 * k12 - d2 * k22;
    a_[i1] = a1n;
    a_[i2] = a2n;
    if (is_free(i1)) {
      b_ = b1;
    } else if (is_free(i2)) {
      b_ = b2;
    } else {
      b_ = 0.5 * (b1 + b2);
    }
    for (std::size_t i = 0; i < y_.size(); ++i) {
      const auto ei = static_cast<Eigen::Index>(i);
      g_[i] += d1 * K_(ei, e1i) + d2 * K_(ei, e2i);
    }
    return true;
  }

  static constexpr double kEps = 1e-12;
  static constexpr int kPolishSteps = 100000;
  const Matrix& K_;
  std::vector<double> y_;
  double C_;
  double tol_;
  double polish_tol_ = 1e-3 * tol_;  // tighter than tol so the dual value is near-exact
  std::vector<double> a_;
  std::vector<double> g_;
  double b_ = 0.0;
};

void check_labels(std::span<const int> y) {
  for (int v : y)
    if (v != -1 && v != 1) throw UsageError("SVC labels must be -1 or +1");
}

SvcModel fit_impl(const Matrix& K, std::span<const int> y, const SvcSettings& s, bool strict) {
  if (K.rows() != K.cols()) throw UsageError("SVC Gram matrix must be square");
  if (static_cast<std::size_t>(K.rows()) != y.size()) {
    throw UsageError("SVC Gram matrix and labels differ in size");
  }
  if (y.size() < 2) throw UsageError("SVC needs at least 2 samples");
  if (!(s.C > 0.0) || !(s.tol > 0.0) || s.max_passes < 1) {
    throw ConfigError("SVC needs C > 0, tol > 0 and max_passes >= 1");
  }
  check_labels(y);

  SvcModel model;
  model.C = s.C;
  model.labels.assign(y.begin(), y.end());
  model.alphas.assign(y.size(), 0.0);
  const bool one_class = std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; });
  if (one_class) {
    // The equality constraint forces every alpha to zero.
    model.bias = y[0];
    return model;
  }
  Smo smo(K, y, s);
  model.converged = smo.solve(s.max_passes, model.passes);
  model.alphas = smo.alphas();
  model.bias = smo.final_bias();
  for (std::size_t i = 0; i < y.size(); ++i)
    if (model.alphas[i] > 0.0) model.support.push_back(i);
  double obj = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    obj += model.alphas[i] - 0.5 * model.alphas[i] * y[i] * smo.g()[i];
  }
  model.dual_objective = obj;
  if (strict && !model.converged) {
    throw ConvergenceError("SMO did not converge within " + std::to_string(s.max_passes) +
                           " passes");
  }
  return model;
}

}  // namespace

Matrix rbf_kernel(const Matrix& A, const Matrix& B, double gamma) {
  if (A.cols() != B.cols()) throw DimensionError("RBF kernel: feature counts differ");
  Matrix K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      K(i, j) = std::exp(-gamma * (A.row(i) - B.row(j)).squaredNorm());
    }
  }
  return K;
}

double rbf_gamma_scale(const Matrix& X) {
  if (X.size() == 0) throw DimensionError("RBF gamma: empty matrix");
  const double mean = X.mean();
  const double var = (X.array() - mean).square().mean();
  return var > 0.0 ? 1.0 / (static_cast<double>(X.cols()) * var) : 1.0;
}

SvcModel fit_precomputed(const Matrix& K, std::span<const int> y, const SvcSettings& settings) {
  return fit_impl(K, y, settings, true);
}

SvcModel fit_precomputed_partial(const Matrix& K, std::span<const int> y,
                                 const SvcSettings& settings) {
  return fit_impl(K, y, settings, false);
}

SvcModel fit_rbf(const Matrix& X, std::span<const int> y, double gamma,
                 const SvcSettings& settings) {
  if (!(gamma > 0.0)) throw ConfigError("RBF gamma must be positive");
  SvcModel model = fit_impl(rbf_kernel(X, X, gamma), y, settings, true);
  model.source = KernelSource::Rbf;
  model.gamma = gamma;
  model.train_features = X;
  return model;
}

double decision_value(const SvcModel& model, std::span<const double> k_row) {
  if (k_row.size() != model.alphas.size()) {
    throw DimensionError("decision row has " + std::to_string(k_row.size()) +
                         " entries, model has " + std::to_string(model.alphas.size()));
  }
  double f = model.bias;
  for (std::size_t i : model.support) f += model.alphas[i] * model.labels[i] * k_row[i];
  return f;
}

double decision_value_features(const SvcModel& model, std::span<const double> x) {
  if (model.source != KernelSource::Rbf) throw UsageError("model was fitted on a precomputed kernel");
  if (x.size() != static_cast<std::size_t>(model.train_features.cols())) {
    throw DimensionError("feature vector length does not match the model");
  }
  const Eigen::Map<const Eigen::RowVectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  double f = model.bias;
  for (std::size_t i : model.support) {
    const double d2 = (model.train_features.row(static_cast<Eigen::Index>(i)) - xv).squaredNorm();
    f += model.alphas[i] * model.labels[i] * std::exp(-model.gamma * d2);
  }
  return f;
}

int predict(const SvcModel& model, std::span<const double> k_row) {
  return decision_value(model, k_row) >= 0.0 ? 1 : -1;
}

int predict_features(const SvcModel& model, std::span<const double> x) {
  return decision_value_features(model, x) >= 0.0 ? 1 : -1;
}

double dual_objective(const Matrix& K, std::span<const int> y, std::span<const double> alphas) {
  if (K.rows() != K.cols() || static_cast<std::size_t>(K.rows()) != y.size() ||
      alphas.size() != y.size()) {
    throw UsageError("dual objective: K, y and alphas disagree in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += alphas[i];
    for (std::size_t j = 0; j < y.size(); ++j) {
      total -= 0.5 * alphas[i] * alphas[j] * y[i] * y[j] *
               K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return total;
}

}  // namespace qdr
