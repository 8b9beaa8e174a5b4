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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdimred/datasets.hpp"
#include "qdimred/error.hpp"
#include "qdimred/dimred.hpp"
#include "qdimred/metrics.hpp"
#include "qdimred/nn.hpp"
#include "qdimred/qkernel.hpp"
#include "qdimred/qnn.hpp"
#include "qdimred/svm.hpp"

namespace qdr {

inline constexpr int kSuiteSchemaVersion = 1;

enum class ModelKind { QNN, QSVC, ClassicalSVC, CNN };
std::string_view to_string(ModelKind kind);  // "qnn", "qsvc", "svc", "cnn"
ModelKind parse_model_kind(std::string_view name);

// Feature scaling fitted on the train rows before reduction.
enum class Scaling { None, Standard, MinMax };
std::string_view to_string(Scaling scaling);  // "none", "standard", "minmax"
Scaling parse_scaling(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Linear;
  LinearGenConfig linear;
  NonlinearGenConfig nonlinear;
  ImageGenConfig image;
  // When unset every run regenerates the data from its run seed.
  std::optional<std::uint64_t> fixed_seed;
};

struct ReductionStage {
  ReductionSpec spec;
  Scaling scaling = Scaling::Standard;
};

struct ExperimentConfig {
  std::string name;
  DatasetSpec dataset;
  std::optional<ReductionStage> reduction;
  ModelKind model = ModelKind::QNN;
  QnnConfig qnn;  // n_qubits is derived from the data width
  TrainSettings qnn_training;
  KernelConfig kernel;  // n_qubits is derived from the data width
  KernelTrainSettings kernel_training;
  SvcSettings svc;
  std::optional<double> svc_gamma;  // unset: 1 / (n_features * var)
  CnnSettings cnn;
  int repeats = 10;
  double train_fraction = 0.8;
};

// Feature count produced by the generator.
int dataset_width(const DatasetSpec& spec);
// Width seen by the model: the reduction target or the raw feature count.
int model_width(const ExperimentConfig& config);
// Checks the model width rules (QNN 8..16 even, QSVC 4..8) and every
// sub-config. Throws ConfigError naming the violated rule.
void validate(const ExperimentConfig& config);

struct Suite {
  int schema_version = kSuiteSchemaVersion;
  std::vector<ExperimentConfig> experiments;  // target_dim lists already expanded
};

// Strict JSON reader: unknown fields and wrong types raise ParseError naming
// the field path; syntax errors name the line.
Suite parse_suite(std::string_view text, const std::string& source = "<suite>");
Suite load_suite(const std::string& path);

// Labels for the result columns.
std::string reduction_label(const ExperimentConfig& config);  // e.g. "pca+standard", "none"
std::string ansatz_label(const ExperimentConfig& config);
std::string embedding_label(const ExperimentConfig& config);

// Scaling and reduction of one run's features, both fitted on the train rows
// only. Without a reduction stage the features pass through unchanged.
ReducedDataset prepare_features(const ExperimentConfig& config, const Matrix& train,
                                const Matrix& test, std::uint64_t run_seed);

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  MetricsReport mean;  // per-metric mean; confusion counts summed
};

// One repeat: generate, split, scale + reduce (fitted on train), train, test.
// Seed is master_seed + run. Failures are rethrown as StageError.
RunRecord run_single(const ExperimentConfig& config, int run, std::uint64_t master_seed);
ExperimentResult run_experiment(const ExperimentConfig& config, std::uint64_t master_seed);
// Runs every (experiment, repeat) pair on up to `parallel` threads; output
// order is the config/run order regardless of completion order.
std::vector<ExperimentResult> run_suite(const Suite& suite, std::uint64_t master_seed,
                                        int parallel = 1);

class StageError : public Error {
 public:
  StageError(const std::string& experiment, int run, const std::string& stage,
             const std::string& what);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

MetricsReport mean_metrics(const std::vector<RunRecord>& runs);

// results.csv: one row per run plus a "mean" row per experiment.
std::string results_csv(const std::vector<ExperimentResult>& results);
std::string results_json(const std::vector<ExperimentResult>& results);
// summary.csv: one row of means per experiment.
std::string summary_csv(const std::vector<ExperimentResult>& results);
// comparison.csv: QSVC against classical SVC on matched data and reduction.
std::string comparison_csv(const std::vector<ExperimentResult>& results);

struct RunMetadata {
  std::string suite_path;
  std::uint64_t master_seed = 0;
  std::string started_at;   // ISO 8601, UTC
  std::string finished_at;  // ISO 8601, UTC
};

// Writes results.csv, results.json, summary.csv, comparison.csv and
// metadata.json (the only file carrying timestamps) into out_dir.
void write_outputs(const std::vector<ExperimentResult>& results, const RunMetadata& meta,
                   const std::string& out_dir);

std::string utc_timestamp();

}  // namespace qdr
