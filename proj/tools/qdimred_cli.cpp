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

// Command-line front end: run suites, generate datasets, reduce CSV files.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qdimred/datasets.hpp"
#include "qdimred/dimred.hpp"
#include "qdimred/harness.hpp"

namespace {

int cmd_run(const std::string& suite_path, const std::string& out, std::uint64_t seed, int repeats,
            int parallel) {
  qdr::Suite suite = qdr::load_suite(suite_path);
  if (repeats > 0) {
    for (auto& e : suite.experiments) e.repeats = repeats;
  }
  qdr::RunMetadata meta;
  meta.suite_path = suite_path;
  meta.master_seed = seed;
  meta.started_at = qdr::utc_timestamp();
  const auto results = qdr::run_suite(suite, seed, parallel);
  meta.finished_at = qdr::utc_timestamp();
  qdr::write_outputs(results, meta, out);
  std::cout << qdr::summary_csv(results);
  return 0;
}

int cmd_gen(const std::string& kind, const std::string& out, std::uint64_t seed, int n_samples) {
  qdr::Dataset ds;
  switch (qdr::parse_dataset_kind(kind)) {
    case qdr::DatasetKind::Linear: {
      qdr::LinearGenConfig c;
      c.seed = seed;
      if (n_samples > 0) c.n_samples = n_samples;
      ds = qdr::gen_linear(c);
      break;
    }
    case qdr::DatasetKind::Nonlinear: {
      qdr::NonlinearGenConfig c;
      c.seed = seed;
      if (n_samples > 0) c.n_samples = n_samples;
      ds = qdr::gen_nonlinear(c);
      break;
    }
    case qdr::DatasetKind::Image4x4: {
      qdr::ImageGenConfig c;
      c.seed = seed;
      if (n_samples > 0) c.n_samples = n_samples;
      ds = qdr::gen_image4x4(c);
      break;
    }
  }
  qdr::write_csv(ds, out);
  std::cerr << ds.provenance << '\n';
  return 0;
}

// The whole file is treated as training data; labels pass through unchanged.
int cmd_reduce(const std::string& method, int dim, const std::string& in, const std::string& out,
               std::uint64_t seed) {
  qdr::Dataset ds = qdr::read_csv(in);
  qdr::ReductionSpec spec;
  spec.method = qdr::parse_reduction_method(method);
  spec.target_dim = dim;
  spec.seed = seed;
  const qdr::ReducedDataset r = qdr::reduce(spec, ds.X, qdr::Matrix(0, ds.X.cols()));
  qdr::Dataset reduced{r.train, ds.y, ds.provenance + ";reduced=" + method + ":" + std::to_string(dim)};
  qdr::write_csv(reduced, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdimred: quantum classifiers under classical dimensionality reduction"};
  app.require_subcommand(1);

  std::string suite, out_dir;
  std::uint64_t seed = 0;
  int repeats = 0, parallel = 1;
  auto* run = app.add_subcommand("run", "Run an experiment suite");
  run->add_option("--suite", suite, "Suite JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Master seed")->required();
  run->add_option("--repeats", repeats, "Override the repeat count of every experiment")
      ->check(CLI::PositiveNumber);
  run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

  std::string kind, gen_out;
  std::uint64_t gen_seed = 0;
  int n_samples = 0;
  auto* gen = app.add_subcommand("gen-dataset", "Write a synthetic dataset as CSV");
  gen->add_option("--kind", kind, "linear | nonlinear | image4x4")->required();
  gen->add_option("--out", gen_out, "Output CSV")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--samples", n_samples, "Sample count (generator default if omitted)")
      ->check(CLI::PositiveNumber);

  std::string method, in, red_out;
  int dim = 0;
  std::uint64_t red_seed = 0;
  auto* red = app.add_subcommand("reduce", "Reduce the feature columns of a CSV dataset");
  red->add_option("--method", method, "pca | tsvd | tsne | autoencoder")->required();
  red->add_option("--dim", dim, "Target dimension")->required()->check(CLI::PositiveNumber);
  red->add_option("--in", in, "Input CSV")->required()->check(CLI::ExistingFile);
  red->add_option("--out", red_out, "Output CSV")->required();
  red->add_option("--seed", red_seed, "Seed for t-SNE and autoencoder");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(suite, out_dir, seed, repeats, parallel);
    if (*gen) return cmd_gen(kind, gen_out, gen_seed, n_samples);
    if (*red) return cmd_reduce(method, dim, in, red_out, red_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
