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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdimred/linalg.hpp"

namespace qdr {

struct Dataset {
  Matrix X;
  std::vector<int> y;      // {0, 1}
  std::string provenance;  // generator kind, settings and seed
};

enum class DatasetKind { Linear, Nonlinear, Image4x4 };

std::string_view to_string(DatasetKind kind);
// Accepts "linear", "nonlinear", "image4x4".
DatasetKind parse_dataset_kind(std::string_view name);

// Gaussian clusters on hypercube vertices, in the style of the Madelon
// generator.
struct LinearGenConfig {
  int n_samples = 500;
  int n_features = 16;
  int n_informative = 8;
  int n_redundant = 4;
  int n_repeated = 0;
  int clusters_per_class = 2;
  double class_sep = 1.0;
  double flip_y = 0.01;
  std::uint64_t seed = 0;
};

// Gaussian-copula informative block with uniform [-1, 1] marginals, labelled
// by a median split of a named nonlinear function.
struct NonlinearGenConfig {
  int n_samples = 500;
  int n_informative = 4;
  int n_redundant = 2;
  int n_nuisance = 2;
  // Correlation of the informative block. Empty means 0.3 off the diagonal.
  Matrix correlation;
  std::string label_function = "default";
  std::uint64_t seed = 0;
};

// Flattened 4x4 grayscale grids. Class 0 lights a diagonal, class 1 a row or
// a column.
struct ImageGenConfig {
  int n_samples = 500;
  double hi_lo = 0.6;
  double hi_hi = 1.0;
  double bg_lo = 0.0;
  double bg_hi = 0.3;
  double class0_fraction = 0.5;  // share of samples with label 0
  std::uint64_t seed = 0;
};

void validate(const LinearGenConfig& cfg);
void validate(const NonlinearGenConfig& cfg);
void validate(const ImageGenConfig& cfg);

Dataset gen_linear(const LinearGenConfig& cfg);
Dataset gen_nonlinear(const NonlinearGenConfig& cfg);
Dataset gen_image4x4(const ImageGenConfig& cfg);

// Registered label functions of the informative features x1..x4 (1-based):
//   "default":   x1 x2 + sin(pi x3) + x4^2
//   "xor":       x1 x2
//   "sphere":    x1^2 + x2^2 + x3^2 + x4^2
//   "ripple":    sin(pi x1) cos(pi x2) + x3 x4
std::vector<std::string> label_function_names();
double label_function(std::string_view name, std::span<const double> informative);

// Correlation used when NonlinearGenConfig::correlation is empty.
Matrix default_correlation(int n_informative);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Stratified by label: round(train_fraction * class count) rows of each class
// go to train.
SplitIndices split(const Dataset& ds, double train_fraction, std::uint64_t seed);
Dataset subset(const Dataset& ds, std::span<const std::size_t> idx);

// Header f0..f{n-1},label; values printed with 17 significant digits.
void write_csv(const Dataset& ds, const std::string& path);
Dataset read_csv(const std::string& path);

}  // namespace qdr
