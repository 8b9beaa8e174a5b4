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

#include "qdimred/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qdimred/error.hpp"
#include "qdimred/rng.hpp"

namespace qdr {
namespace {

std::string describe(const LinearGenConfig& c) {
  std::ostringstream os;
  os << "linear(n_samples=" << c.n_samples << ",n_features=" << c.n_features
     << ",n_informative=" << c.n_informative << ",n_redundant=" << c.n_redundant
     << ",n_repeated=" << c.n_repeated << ",clusters_per_class=" << c.clusters_per_class
     << ",class_sep=" << c.class_sep << ",flip_y=" << c.flip_y << ",seed=" << c.seed << ")";
  return os.str();
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Linear: return "linear";
    case DatasetKind::Nonlinear: return "nonlinear";
    case DatasetKind::Image4x4: return "image4x4";
  }
  return "?";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "linear") return DatasetKind::Linear;
  if (name == "nonlinear") return DatasetKind::Nonlinear;
  if (name == "image4x4") return DatasetKind::Image4x4;
  throw ConfigError("unknown dataset kind '" + std::string(name) + "'");
}

void validate(const LinearGenConfig& c) {
  if (c.n_features < 1 || c.n_informative < 1 || c.n_redundant < 0 || c.n_repeated < 0) {
    throw ConfigError("linear generator: feature counts must be non-negative, informative >= 1");
  }
  if (c.n_informative + c.n_redundant + c.n_repeated > c.n_features) {
    throw ConfigError("linear generator: informative + redundant + repeated exceeds n_features");
  }
  if (c.clusters_per_class < 1) throw ConfigError("linear generator: clusters_per_class < 1");
  if (c.n_informative < 62 &&
      2.0 * c.clusters_per_class > std::ldexp(1.0, c.n_informative)) {
    throw ConfigError("linear generator: more clusters than hypercube vertices");
  }
  if (c.n_samples < 2 * c.clusters_per_class) {
    throw ConfigError("linear generator: fewer samples than clusters");
  }
  if (!(c.flip_y >= 0.0 && c.flip_y <= 1.0)) throw ConfigError("linear generator: flip_y not in [0, 1]");
  if (!(c.class_sep >= 0.0)) throw ConfigError("linear generator: class_sep must be >= 0");
}

Dataset gen_linear(const LinearGenConfig& c) {
  validate(c);
  Rng rng(c.seed);
  const int n = c.n_samples;
  const int n_inf = c.n_informative;
  const int n_clusters = 2 * c.clusters_per_class;

  std::vector<int> cluster_size(static_cast<std::size_t>(n_clusters), n / n_clusters);
  for (int k = 0; k < n % n_clusters; ++k) ++cluster_size[static_cast<std::size_t>(k)];

  // Distinct hypercube vertices as centroids, coordinates +-class_sep.
  std::vector<std::uint64_t> vertices;
  const std::uint64_t n_vertices =
      n_inf >= 62 ? (std::uint64_t{1} << 62) : (std::uint64_t{1} << n_inf);
  while (vertices.size() < static_cast<std::size_t>(n_clusters)) {
    const std::uint64_t v = rng.index(n_vertices);
    if (std::find(vertices.begin(), vertices.end(), v) == vertices.end()) vertices.push_back(v);
  }

  Matrix X = Matrix::Zero(n, c.n_features);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < n_inf; ++j) X(i, j) = rng.normal();

  Eigen::Index start = 0;
  for (int k = 0; k < n_clusters; ++k) {
    const Eigen::Index rows = cluster_size[static_cast<std::size_t>(k)];
    Matrix A(n_inf, n_inf);
    for (Eigen::Index r = 0; r < n_inf; ++r)
      for (Eigen::Index q = 0; q < n_inf; ++q) A(r, q) = rng.uniform(-1.0, 1.0);
    Matrix block = X.block(start, 0, rows, n_inf) * A;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (int j = 0; j < n_inf; ++j) {
        const bool bit = j < 62 && ((vertices[static_cast<std::size_t>(k)] >> j) & 1U);
        block(r, j) += bit ? c.class_sep : -c.class_sep;
      }
      y[static_cast<std::size_t>(start + r)] = k % 2;
    }
    X.block(start, 0, rows, n_inf) = block;
    start += rows;
  }

  if (c.n_redundant > 0) {
    Matrix B(n_inf, c.n_redundant);
    for (Eigen::Index r = 0; r < B.rows(); ++r)
      for (Eigen::Index q = 0; q < B.cols(); ++q) B(r, q) = rng.uniform(-1.0, 1.0);
    X.block(0, n_inf, n, c.n_redundant) = X.leftCols(n_inf) * B;
  }
  const int n_useful = n_inf + c.n_redundant;
  for (int j = 0; j < c.n_repeated; ++j) {
    const auto src = static_cast<Eigen::Index>((n_useful - 1) * rng.uniform() + 0.5);
    X.col(n_useful + j) = X.col(src);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = n_useful + c.n_repeated; j < c.n_features; ++j) X(i, j) = rng.normal();

  // Exactly round(flip_y * n) labels are inverted.
  const auto n_flip = static_cast<std::size_t>(std::llround(c.flip_y * n));
  const auto flip_order = rng.permutation(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < n_flip; ++k) y[flip_order[k]] = 1 - y[flip_order[k]];

  const auto row_order = rng.permutation(static_cast<std::size_t>(n));
  const auto col_order = rng.permutation(static_cast<std::size_t>(c.n_features));
  Dataset ds;
  ds.X.resize(n, c.n_features);
  ds.y.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = static_cast<Eigen::Index>(row_order[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < c.n_features; ++j) {
      ds.X(i, j) = X(src, static_cast<Eigen::Index>(col_order[static_cast<std::size_t>(j)]));
    }
    ds.y[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(src)];
  }
  ds.provenance = describe(c);
  return ds;
}

std::vector<std::string> label_function_names() { return {"default", "xor", "sphere", "ripple"}; }

double label_function(std::string_view name, std::span<const double> x) {
  constexpr double pi = std::numbers::pi;
  if (x.size() < 4) throw ConfigError("label functions need at least 4 informative features");
  if (name == "default") return x[0] * x[1] + std::sin(pi * x[2]) + x[3] * x[3];
  if (name == "xor") return x[0] * x[1];
  if (name == "sphere") return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  if (name == "ripple") return std::sin(pi * x[0]) * std::cos(pi * x[1]) + x[2] * x[3];
  throw ConfigError("unknown label function '" + std::string(name) + "'");
}

Matrix default_correlation(int n_informative) {
  Matrix r = Matrix::Constant(n_informative, n_informative, 0.3);
  r.diagonal().setOnes();
  return r;
}

void validate(const NonlinearGenConfig& c) {
  if (c.n_samples < 2) throw ConfigError("nonlinear generator: need at least 2 samples");
  if (c.n_informative < 4) throw ConfigError("nonlinear generator: need at least 4 informative");
  if (c.n_redundant < 0 || c.n_nuisance < 0) {
    throw ConfigError("nonlinear generator: negative feature count");
  }
  label_function(c.label_function, std::vector<double>(static_cast<std::size_t>(c.n_informative)));
  if (c.correlation.size() == 0) return;
  const Matrix& r = c.correlation;
  if (r.rows() != c.n_informative || r.cols() != c.n_informative) {
    throw ConfigError("nonlinear generator: correlation must be n_informative square");
  }
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    if (std::abs(r(i, i) - 1.0) > 1e-12) throw ConfigError("correlation diagonal must be 1");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(r(i, j) - r(j, i)) > 1e-12) throw ConfigError("correlation must be symmetric");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("nonlinear generator: correlation is not positive definite");
  }
}

Dataset gen_nonlinear(const NonlinearGenConfig& c) {
  validate(c);
  Rng rng(c.seed);
  const int n = c.n_samples;
  const int k = c.n_informative;
  const Matrix corr = c.correlation.size() == 0 ? default_correlation(k) : c.correlation;
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(corr).matrixL();

  const int n_features = k + c.n_redundant + c.n_nuisance;
  Dataset ds;
  ds.X = Matrix::Zero(n, n_features);
  Eigen::VectorXd g(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) g(j) = rng.normal();
    const Eigen::VectorXd z = L * g;
    for (int j = 0; j < k; ++j) ds.X(i, j) = 2.0 * standard_normal_cdf(z(j)) - 1.0;
  }
  if (c.n_redundant > 0) {
    Matrix B(k, c.n_redundant);
    for (Eigen::Index r = 0; r < B.rows(); ++r)
      for (Eigen::Index q = 0; q < B.cols(); ++q) B(r, q) = rng.uniform(-1.0, 1.0);
    ds.X.block(0, k, n, c.n_redundant) = ds.X.leftCols(k) * B / static_cast<double>(k);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = k + c.n_redundant; j < n_features; ++j) ds.X(i, j) = rng.uniform(-1.0, 1.0);

  // Median split by rank: the lower floor(n / 2) scores get label 0.
  std::vector<double> score(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    score[static_cast<std::size_t>(i)] = label_function(c.label_function, row_span(ds.X, i).first(k));
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  ds.y.assign(static_cast<std::size_t>(n), 1);
  for (std::size_t r = 0; r < static_cast<std::size_t>(n / 2); ++r) ds.y[order[r]] = 0;

  std::ostringstream os;
  os << "nonlinear(n_samples=" << n << ",n_informative=" << k << ",n_redundant=" << c.n_redundant
     << ",n_nuisance=" << c.n_nuisance << ",label_function=" << c.label_function
     << ",seed=" << c.seed << ")";
  ds.provenance = os.str();
  return ds;
}

void validate(const ImageGenConfig& c) {
  if (c.n_samples < 1) throw ConfigError("image generator: need at least 1 sample");
  if (!(c.hi_lo > 0.0 && c.hi_lo <= c.hi_hi && c.hi_hi <= 1.0)) {
    throw ConfigError("image generator: high range must satisfy 0 < hi_lo <= hi_hi <= 1");
  }
  if (!(c.bg_lo >= 0.0 && c.bg_lo <= c.bg_hi && c.bg_hi < 1.0)) {
    throw ConfigError("image generator: background range must satisfy 0 <= bg_lo <= bg_hi < 1");
  }
  if (!(c.bg_hi < c.hi_lo)) throw ConfigError("image generator: background overlaps high range");
  if (!(c.class0_fraction >= 0.0 && c.class0_fraction <= 1.0)) {
    throw ConfigError("image generator: class0_fraction not in [0, 1]");
  }
}

Dataset gen_image4x4(const ImageGenConfig& c) {
  validate(c);
  Rng rng(c.seed);
  const int n = c.n_samples;
  const auto n0 = static_cast<int>(std::llround(c.class0_fraction * n));
  std::vector<int> labels(static_cast<std::size_t>(n), 1);
  std::fill(labels.begin(), labels.begin() + n0, 0);
  rng.shuffle(labels);

  static constexpr std::array<std::array<int, 4>, 2> kDiagonals{{{0, 5, 10, 15}, {3, 6, 9, 12}}};
  Dataset ds;
  ds.X.resize(n, 16);
  ds.y = labels;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int p = 0; p < 16; ++p) ds.X(i, p) = rng.uniform(c.bg_lo, c.bg_hi);
    std::array<int, 4> lit{};
    if (labels[static_cast<std::size_t>(i)] == 0) {
      lit = kDiagonals[rng.index(2)];
    } else {
      const auto pick = static_cast<int>(rng.index(8));
      for (int q = 0; q < 4; ++q) lit[static_cast<std::size_t>(q)] = pick < 4 ? 4 * pick + q : (pick - 4) + 4 * q;
    }
    for (int p : lit) ds.X(i, p) = rng.uniform(c.hi_lo, c.hi_hi);
  }
  std::ostringstream os;
  os << "image4x4(n_samples=" << n << ",hi=[" << c.hi_lo << "," << c.hi_hi << "],bg=[" << c.bg_lo
     << "," << c.bg_hi << "],class0_fraction=" << c.class0_fraction << ",seed=" << c.seed << ")";
  ds.provenance = os.str();
  return ds;
}

SplitIndices split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  }
  if (static_cast<std::size_t>(ds.X.rows()) != ds.y.size()) {
    throw DimensionError("dataset rows and labels differ in count");
  }
  Rng rng(seed);
  SplitIndices out;
  for (int label : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.y.size(); ++i)
      if (ds.y[i] == label) members.push_back(i);
    rng.shuffle(members);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(members.size())));
    out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  if (out.train.empty() || out.test.empty()) {
    throw ConfigError("split leaves the train or test set empty");
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> idx) {
  Dataset out;
  out.X = take_rows(ds.X, idx);
  out.y.reserve(idx.size());
  for (std::size_t i : idx) out.y.push_back(ds.y.at(i));
  out.provenance = ds.provenance;
  return out;
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  for (Eigen::Index j = 0; j < ds.X.cols(); ++j) f << 'f' << j << ',';
  f << "label\n";
  char buf[40];
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.X(i, j));
      f << buf << ',';
    }
    f << ds.y[static_cast<std::size_t>(i)] << '\n';
  }
  if (!f) throw Error("failed writing '" + path + "'");
}

Dataset read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw ParseError(path + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.back() != "label") {
    throw ParseError(path + ":1: header must end with 'label'");
  }
  const std::size_t n_features = header.size() - 1;
  for (std::size_t j = 0; j < n_features; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw ParseError(path + ":1: expected column f" + std::to_string(j));
    }
  }
  std::vector<double> values;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        if (col < n_features) {
          values.push_back(std::stod(cell, &used));
        } else if (col == n_features) {
          labels.push_back(std::stoi(cell, &used));
          if (labels.back() != 0 && labels.back() != 1) throw std::invalid_argument("label");
        }
        if (used != cell.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
      ++col;
    }
    if (col != n_features + 1) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(n_features + 1) + " fields");
    }
  }
  Dataset ds;
  ds.X = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(labels.size()),
                            static_cast<Eigen::Index>(n_features));
  ds.y = std::move(labels);
  ds.provenance = "csv(" + path + ")";
  return ds;
}

}  // namespace qdr
