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

#include "qdimred/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qdr {

using nlohmann::json;

namespace {

// Salts keep the per-stage random streams of one run independent.
constexpr std::uint64_t kSplitSalt = 0x1d8e4e27c47d124fULL;
constexpr std::uint64_t kReduceSalt = 0x6a09e667f3bcc909ULL;
constexpr std::uint64_t kModelSalt = 0xbb67ae8584caa73bULL;

// ---------------------------------------------------------------------------
// Strict JSON object reader.

std::string type_name(const json& j) { return j.type_name(); }

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_ + ": expected an object, got " + type_name(j_));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ParseError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ParseError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<long long>() < 0) throw ParseError("");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ParseError("");
      } else {
        if (!v.is_string()) throw ParseError("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw ParseError(child(key) + ": wrong type " + type_name(v));
    }
  }

  std::string string(const std::string& key, const std::string& fallback) {
    std::string s = fallback;
    read(key, s);
    return s;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ParseError(child(it.key()) + ": unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DatasetSpec parse_dataset(const json& j, const std::string& path) {
  Reader r(j, path);
  DatasetSpec spec;
  if (!r.has("kind")) throw ParseError(path + ".kind: missing");
  const std::string kind = r.string("kind", "");
  spec.kind = wrap(r.child("kind"), [&] { return parse_dataset_kind(kind); });
  if (r.has("seed")) {
    std::uint64_t seed = 0;
    r.read("seed", seed);
    spec.fixed_seed = seed;
  }
  switch (spec.kind) {
    case DatasetKind::Linear: {
      auto& c = spec.linear;
      r.read("n_samples", c.n_samples);
      r.read("n_features", c.n_features);
      r.read("n_informative", c.n_informative);
      r.read("n_redundant", c.n_redundant);
      r.read("n_repeated", c.n_repeated);
      r.read("clusters_per_class", c.clusters_per_class);
      r.read("class_sep", c.class_sep);
      r.read("flip_y", c.flip_y);
      wrap(path, [&] { validate(c); });
      break;
    }
    case DatasetKind::Nonlinear: {
      auto& c = spec.nonlinear;
      r.read("n_samples", c.n_samples);
      r.read("n_informative", c.n_informative);
      r.read("n_redundant", c.n_redundant);
      r.read("n_nuisance", c.n_nuisance);
      r.read("label_function", c.label_function);
      if (r.has("correlation")) {
        const json& v = r.at("correlation");
        if (v.is_number()) {
          c.correlation = Matrix::Constant(c.n_informative, c.n_informative, v.get<double>());
          c.correlation.diagonal().setOnes();
        } else if (v.is_array()) {
          const auto n = static_cast<Eigen::Index>(v.size());
          c.correlation.resize(n, n);
          for (Eigen::Index i = 0; i < n; ++i) {
            const json& row = v[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
              throw ParseError(r.child("correlation") + ": expected a square matrix");
            }
            for (Eigen::Index k = 0; k < n; ++k) {
              const json& e = row[static_cast<std::size_t>(k)];
              if (!e.is_number()) throw ParseError(r.child("correlation") + ": non-numeric entry");
              c.correlation(i, k) = e.get<double>();
            }
          }
        } else {
          throw ParseError(r.child("correlation") + ": expected a number or a matrix");
        }
      }
      wrap(path, [&] { validate(c); });
      break;
    }
    case DatasetKind::Image4x4: {
      auto& c = spec.image;
      r.read("n_samples", c.n_samples);
      r.read("hi_lo", c.hi_lo);
      r.read("hi_hi", c.hi_hi);
      r.read("bg_lo", c.bg_lo);
      r.read("bg_hi", c.bg_hi);
      r.read("class0_fraction", c.class0_fraction);
      wrap(path, [&] { validate(c); });
      break;
    }
  }
  r.finish();
  return spec;
}

// Returns the stage template and the list of target dims.
std::pair<ReductionStage, std::vector<int>> parse_reduction(const json& j, const std::string& path) {
  Reader r(j, path);
  ReductionStage stage;
  if (!r.has("method")) throw ParseError(path + ".method: missing");
  const std::string method = r.string("method", "");
  stage.spec.method = wrap(r.child("method"), [&] { return parse_reduction_method(method); });
  stage.scaling =
      stage.spec.method == ReductionMethod::Autoencoder ? Scaling::MinMax : Scaling::Standard;
  if (r.has("scaling")) {
    const std::string s = r.string("scaling", "");
    stage.scaling = wrap(r.child("scaling"), [&] { return parse_scaling(s); });
  }
  std::vector<int> dims;
  if (!r.has("target_dim")) throw ParseError(path + ".target_dim: missing");
  const json& td = r.at("target_dim");
  if (td.is_number_integer()) {
    dims.push_back(td.get<int>());
  } else if (td.is_array() && !td.empty()) {
    for (const json& v : td) {
      if (!v.is_number_integer()) throw ParseError(r.child("target_dim") + ": non-integer entry");
      dims.push_back(v.get<int>());
    }
  } else {
    throw ParseError(r.child("target_dim") + ": expected an integer or a non-empty list");
  }
  if (r.has("tsne")) {
    Reader t(r.at("tsne"), r.child("tsne"));
    auto& s = stage.spec.tsne;
    t.read("perplexity", s.perplexity);
    t.read("iterations", s.iterations);
    t.read("exaggeration_iterations", s.exaggeration_iterations);
    t.read("exaggeration", s.exaggeration);
    t.read("learning_rate", s.learning_rate);
    t.read("neighbors", s.neighbors);
    t.finish();
  }
  if (r.has("autoencoder")) {
    Reader a(r.at("autoencoder"), r.child("autoencoder"));
    auto& s = stage.spec.autoencoder;
    a.read("epochs", s.epochs);
    a.read("batch_size", s.batch_size);
    a.read("learning_rate", s.learning_rate);
    a.read("linear", s.linear);
    a.finish();
  }
  r.finish();
  return {stage, dims};
}

void parse_model(const json& j, const std::string& path, ExperimentConfig& cfg) {
  Reader r(j, path);
  if (!r.has("kind")) throw ParseError(path + ".kind: missing");
  const std::string kind = r.string("kind", "");
  cfg.model = wrap(r.child("kind"), [&] { return parse_model_kind(kind); });
  switch (cfg.model) {
    case ModelKind::QNN: {
      const std::string ansatz = r.string("ansatz", std::string(to_string(cfg.qnn.ansatz)));
      cfg.qnn.ansatz = wrap(r.child("ansatz"), [&] { return parse_ansatz_kind(ansatz); });
      const std::string emb = r.string("embedding", std::string(to_string(cfg.qnn.embedding.kind)));
      cfg.qnn.embedding.kind = wrap(r.child("embedding"), [&] { return parse_embedding_kind(emb); });
      r.read("iqp_repeats", cfg.qnn.embedding.iqp_repeats);
      r.read("layers", cfg.qnn.layers);
      r.read("pooling", cfg.qnn.pooling);
      const std::string wiring = r.string("wiring", std::string(to_string(cfg.qnn.wiring)));
      cfg.qnn.wiring = wrap(r.child("wiring"), [&] { return parse_wiring(wiring); });
      break;
    }
    case ModelKind::QSVC: {
      const std::string emb = r.string("embedding", std::string(to_string(cfg.kernel.embedding.kind)));
      cfg.kernel.embedding.kind = wrap(r.child("embedding"), [&] { return parse_embedding_kind(emb); });
      r.read("layers", cfg.kernel.layers);
      r.read("trainable", cfg.kernel.trainable);
      r.read("C", cfg.svc.C);
      break;
    }
    case ModelKind::ClassicalSVC: {
      r.read("C", cfg.svc.C);
      if (r.has("gamma")) {
        const json& g = r.at("gamma");
        if (g.is_string() && g.get<std::string>() == "scale") {
          cfg.svc_gamma.reset();
        } else if (g.is_number()) {
          cfg.svc_gamma = g.get<double>();
        } else {
          throw ParseError(r.child("gamma") + ": expected \"scale\" or a number");
        }
      }
      break;
    }
    case ModelKind::CNN:
      break;
  }
  r.finish();
}

void parse_training(const json& j, const std::string& path, ExperimentConfig& cfg) {
  Reader r(j, path);
  switch (cfg.model) {
    case ModelKind::QNN:
      r.read("iterations", cfg.qnn_training.iterations);
      r.read("batch_size", cfg.qnn_training.batch_size);
      r.read("learning_rate", cfg.qnn_training.learning_rate);
      break;
    case ModelKind::QSVC:
      r.read("iterations", cfg.kernel_training.iterations);
      r.read("batch_size", cfg.kernel_training.batch_size);
      r.read("learning_rate", cfg.kernel_training.learning_rate);
      r.read("tol", cfg.svc.tol);
      r.read("max_passes", cfg.svc.max_passes);
      break;
    case ModelKind::ClassicalSVC:
      r.read("tol", cfg.svc.tol);
      r.read("max_passes", cfg.svc.max_passes);
      break;
    case ModelKind::CNN:
      r.read("epochs", cfg.cnn.epochs);
      r.read("batch_size", cfg.cnn.batch_size);
      r.read("learning_rate", cfg.cnn.learning_rate);
      break;
  }
  r.finish();
}

std::vector<ExperimentConfig> parse_experiment(const json& j, const std::string& path) {
  Reader r(j, path);
  ExperimentConfig base;
  r.read("name", base.name);
  if (!r.has("dataset")) throw ParseError(path + ".dataset: missing");
  base.dataset = parse_dataset(r.at("dataset"), r.child("dataset"));
  if (!r.has("model")) throw ParseError(path + ".model: missing");
  parse_model(r.at("model"), r.child("model"), base);
  if (r.has("training")) parse_training(r.at("training"), r.child("training"), base);
  r.read("repeats", base.repeats);
  r.read("train_fraction", base.train_fraction);

  std::vector<ExperimentConfig> out;
  const bool reduced = r.has("reduction") && !r.at("reduction").is_null() &&
                       !(r.at("reduction").is_string() && r.at("reduction").get<std::string>() == "none");
  if (!reduced) {
    if (r.has("reduction")) r.at("reduction");
    out.push_back(base);
  } else {
    auto [stage, dims] = parse_reduction(r.at("reduction"), r.child("reduction"));
    for (int d : dims) {
      ExperimentConfig cfg = base;
      cfg.reduction = stage;
      cfg.reduction->spec.target_dim = d;
      out.push_back(cfg);
    }
  }
  r.finish();
  for (auto& cfg : out) wrap(path, [&] { validate(cfg); });
  return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// ---------------------------------------------------------------------------
// Pipeline helpers.

std::vector<int> to_pm(std::span<const int> y) {
  std::vector<int> out;
  out.reserve(y.size());
  for (int v : y) out.push_back(v == 1 ? 1 : -1);
  return out;
}

void scale_fit_transform(Scaling scaling, Matrix& train, Matrix& test) {
  if (scaling == Scaling::None) return;
  const Eigen::RowVectorXd lo = train.colwise().minCoeff();
  const Eigen::RowVectorXd hi = train.colwise().maxCoeff();
  Eigen::RowVectorXd shift, scale;
  if (scaling == Scaling::Standard) {
    shift = train.colwise().mean();
    scale = ((train.rowwise() - shift).array().square().colwise().sum() /
             static_cast<double>(train.rows()))
                .sqrt()
                .matrix();
  } else {
    shift = lo;
    scale = hi - lo;
  }
  // Constant columns are only shifted.
  for (Eigen::Index k = 0; k < scale.size(); ++k)
    if (!(scale(k) > 0.0)) scale(k) = 1.0;
  train = ((train.rowwise() - shift).array().rowwise() / scale.array()).matrix();
  if (test.size() > 0) test = ((test.rowwise() - shift).array().rowwise() / scale.array()).matrix();
}

Dataset generate(const DatasetSpec& spec, std::uint64_t seed) {
  const std::uint64_t s = spec.fixed_seed.value_or(seed);
  switch (spec.kind) {
    case DatasetKind::Linear: {
      LinearGenConfig c = spec.linear;
      c.seed = s;
      return gen_linear(c);
    }
    case DatasetKind::Nonlinear: {
      NonlinearGenConfig c = spec.nonlinear;
      c.seed = s;
      return gen_nonlinear(c);
    }
    case DatasetKind::Image4x4: {
      ImageGenConfig c = spec.image;
      c.seed = s;
      return gen_image4x4(c);
    }
  }
  throw ConfigError("unknown dataset kind");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_prefix(const ExperimentConfig& c) {
  const int width = model_width(c);
  const bool quantum = c.model == ModelKind::QNN || c.model == ModelKind::QSVC;
  std::ostringstream os;
  os << to_string(c.dataset.kind) << ',' << reduction_label(c) << ',' << width << ','
     << to_string(c.model) << ',' << ansatz_label(c) << ',' << embedding_label(c) << ','
     << (quantum ? width : 0);
  return os.str();
}


json dataset_json(const DatasetSpec& spec) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  if (spec.fixed_seed) j["seed"] = *spec.fixed_seed;
  switch (spec.kind) {
    case DatasetKind::Linear: {
      const auto& c = spec.linear;
      j["n_samples"] = c.n_samples;
      j["n_features"] = c.n_features;
      j["n_informative"] = c.n_informative;
      j["n_redundant"] = c.n_redundant;
      j["n_repeated"] = c.n_repeated;
      j["clusters_per_class"] = c.clusters_per_class;
      j["class_sep"] = c.class_sep;
      j["flip_y"] = c.flip_y;
      break;
    }
    case DatasetKind::Nonlinear: {
      const auto& c = spec.nonlinear;
      j["n_samples"] = c.n_samples;
      j["n_informative"] = c.n_informative;
      j["n_redundant"] = c.n_redundant;
      j["n_nuisance"] = c.n_nuisance;
      j["label_function"] = c.label_function;
      json rows = json::array();
      for (Eigen::Index i = 0; i < c.correlation.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < c.correlation.cols(); ++k) row.push_back(c.correlation(i, k));
        rows.push_back(row);
      }
      j["correlation"] = rows;
      break;
    }
    case DatasetKind::Image4x4: {
      const auto& c = spec.image;
      j["n_samples"] = c.n_samples;
      j["hi_lo"] = c.hi_lo;
      j["hi_hi"] = c.hi_hi;
      j["bg_lo"] = c.bg_lo;
      j["bg_hi"] = c.bg_hi;
      j["class0_fraction"] = c.class0_fraction;
      break;
    }
  }
  return j;
}

json reduction_json(const std::optional<ReductionStage>& stage) {
  if (!stage) return nullptr;
  const auto& s = stage->spec;
  json j;
  j["method"] = std::string(to_string(s.method));
  j["target_dim"] = s.target_dim;
  j["scaling"] = std::string(to_string(stage->scaling));
  if (s.method == ReductionMethod::TSNE) {
    j["tsne"] = {{"perplexity", s.tsne.perplexity},
                 {"iterations", s.tsne.iterations},
                 {"exaggeration_iterations", s.tsne.exaggeration_iterations},
                 {"exaggeration", s.tsne.exaggeration},
                 {"learning_rate", s.tsne.learning_rate},
                 {"neighbors", s.tsne.neighbors}};
  }
  if (s.method == ReductionMethod::Autoencoder) {
    j["autoencoder"] = {{"epochs", s.autoencoder.epochs},
                        {"batch_size", s.autoencoder.batch_size},
                        {"learning_rate", s.autoencoder.learning_rate},
                        {"linear", s.autoencoder.linear}};
  }
  return j;
}

// Two experiments with equal keys see identical splits and reduced features.
std::string upstream_key(const ExperimentConfig& c) {
  json j;
  j["dataset"] = dataset_json(c.dataset);
  j["reduction"] = reduction_json(c.reduction);
  j["repeats"] = c.repeats;
  j["train_fraction"] = c.train_fraction;
  return j.dump();
}

std::uint64_t master_of(const ExperimentResult& r) {
  return r.runs.empty() ? 0 : r.runs.front().seed - static_cast<std::uint64_t>(r.runs.front().run);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << content;
  if (!out) throw UsageError("write failed for " + path.string());
}

const char* kResultsHeader =
    "dataset,reduction,target_dim,model,ansatz,embedding,n_qubits,run,accuracy,precision,recall,f1,"
    "seed";

}  // namespace

// ---------------------------------------------------------------------------
// Enums and labels.

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::QNN: return "qnn";
    case ModelKind::QSVC: return "qsvc";
    case ModelKind::ClassicalSVC: return "svc";
    case ModelKind::CNN: return "cnn";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::QNN, ModelKind::QSVC, ModelKind::ClassicalSVC, ModelKind::CNN})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

std::string_view to_string(Scaling scaling) {
  switch (scaling) {
    case Scaling::None: return "none";
    case Scaling::Standard: return "standard";
    case Scaling::MinMax: return "minmax";
  }
  return "?";
}

Scaling parse_scaling(std::string_view name) {
  for (Scaling s : {Scaling::None, Scaling::Standard, Scaling::MinMax})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown scaling '" + std::string(name) + "'");
}

int dataset_width(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetKind::Linear: return spec.linear.n_features;
    case DatasetKind::Nonlinear:
      return spec.nonlinear.n_informative + spec.nonlinear.n_redundant + spec.nonlinear.n_nuisance;
    case DatasetKind::Image4x4: return 16;
  }
  return 0;
}

int model_width(const ExperimentConfig& config) {
  return config.reduction ? config.reduction->spec.target_dim : dataset_width(config.dataset);
}

void validate(const ExperimentConfig& config) {
  switch (config.dataset.kind) {
    case DatasetKind::Linear: validate(config.dataset.linear); break;
    case DatasetKind::Nonlinear: validate(config.dataset.nonlinear); break;
    case DatasetKind::Image4x4: validate(config.dataset.image); break;
  }
  const int raw = dataset_width(config.dataset);
  const int width = model_width(config);
  if (config.reduction) {
    if (width < 1 || width > raw) {
      throw ConfigError("reduction target_dim " + std::to_string(width) + " must lie in [1, " +
                        std::to_string(raw) + "]");
    }
  }
  if (config.repeats < 1) throw ConfigError("repeats must be at least 1");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
    throw ConfigError("train_fraction must lie in (0, 1)");
  switch (config.model) {
    case ModelKind::QNN: {
      if (width < 8 || width > 16 || width % 2 != 0) {
        throw ConfigError("QNN width must be one of 8, 10, 12, 14, 16; got " + std::to_string(width));
      }
      QnnConfig q = config.qnn;
      q.n_qubits = width;
      validate(q);
      validate_embedding(q.embedding, static_cast<std::size_t>(width), width);
      const auto& t = config.qnn_training;
      if (t.iterations < 0 || t.batch_size < 1 || !(t.learning_rate > 0.0))
        throw ConfigError("QNN training needs iterations >= 0, batch_size >= 1, learning_rate > 0");
      break;
    }
    case ModelKind::QSVC: {
      if (width < 4 || width > 8) {
        throw ConfigError("QSVC width must lie in 4..8; got " + std::to_string(width));
      }
      KernelConfig k = config.kernel;
      k.n_qubits = width;
      validate(k);
      const auto& t = config.kernel_training;
      if (t.iterations < 0 || t.batch_size < 2 || !(t.learning_rate > 0.0))
        throw ConfigError("kernel training needs iterations >= 0, batch_size >= 2, learning_rate > 0");
      [[fallthrough]];
    }
    case ModelKind::ClassicalSVC:
      if (!(config.svc.C > 0.0) || !(config.svc.tol > 0.0) || config.svc.max_passes < 1)
        throw ConfigError("SVC needs C > 0, tol > 0, max_passes >= 1");
      if (config.svc_gamma && !(*config.svc_gamma > 0.0)) throw ConfigError("SVC gamma must be > 0");
      break;
    case ModelKind::CNN:
      if (width < 6) throw ConfigError("CNN width must be at least 6; got " + std::to_string(width));
      if (config.cnn.epochs < 0 || config.cnn.batch_size < 1 || !(config.cnn.learning_rate > 0.0))
        throw ConfigError("CNN training needs epochs >= 0, batch_size >= 1, learning_rate > 0");
      break;
  }
}

std::string reduction_label(const ExperimentConfig& config) {
  if (!config.reduction) return "none";
  return std::string(to_string(config.reduction->spec.method)) + "+" +
         std::string(to_string(config.reduction->scaling));
}

std::string ansatz_label(const ExperimentConfig& config) {
  switch (config.model) {
    case ModelKind::QNN: return std::string(to_string(config.qnn.ansatz));
    case ModelKind::QSVC:
      return "ry_ring_l" + std::to_string(config.kernel.layers) +
             (config.kernel.trainable ? "_trained" : "_fixed");
    case ModelKind::ClassicalSVC: return "rbf";
    case ModelKind::CNN: return "conv1d";
  }
  return "?";
}

std::string embedding_label(const ExperimentConfig& config) {
  const EmbeddingSpec* e = nullptr;
  if (config.model == ModelKind::QNN) e = &config.qnn.embedding;
  if (config.model == ModelKind::QSVC) e = &config.kernel.embedding;
  if (!e) return "none";
  std::string s(to_string(e->kind));
  if (e->kind == EmbeddingKind::IQP) s += "_r" + std::to_string(e->iqp_repeats);
  return s;
}

// ---------------------------------------------------------------------------
// Suite parsing.

Suite parse_suite(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                     ": JSON syntax error");
  }
  Reader top(doc, source);
  Suite suite;
  if (!top.has("schema_version")) throw ParseError(source + ".schema_version: missing");
  top.read("schema_version", suite.schema_version);
  if (suite.schema_version != kSuiteSchemaVersion) {
    throw ParseError(source + ".schema_version: unsupported version " +
                     std::to_string(suite.schema_version));
  }
  if (!top.has("experiments")) throw ParseError(source + ".experiments: missing");
  const json& list = top.at("experiments");
  if (!list.is_array()) throw ParseError(source + ".experiments: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = source + ".experiments[" + std::to_string(i) + "]";
    for (auto& cfg : parse_experiment(list[i], path)) {
      if (cfg.name.empty()) cfg.name = "experiment" + std::to_string(i);
      suite.experiments.push_back(std::move(cfg));
    }
  }
  top.finish();
  return suite;
}

Suite load_suite(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open suite file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Running.

StageError::StageError(const std::string& experiment, int run, const std::string& stage,
                       const std::string& what)
    : Error("experiment '" + experiment + "' run " + std::to_string(run) + " failed in stage " +
            stage + ": " + what),
      stage_(stage) {}

ReducedDataset prepare_features(const ExperimentConfig& config, const Matrix& train,
                                const Matrix& test, std::uint64_t run_seed) {
  ReducedDataset out{train, test, true};
  if (!config.reduction) return out;
  scale_fit_transform(config.reduction->scaling, out.train, out.test);
  ReductionSpec spec = config.reduction->spec;
  spec.seed = run_seed ^ kReduceSalt;
  return reduce(spec, out.train, out.test);
}

RunRecord run_single(const ExperimentConfig& config, int run, std::uint64_t master_seed) {
  const std::uint64_t seed = master_seed + static_cast<std::uint64_t>(run);
  std::string stage;
  auto guarded = [&](const char* name, auto&& fn) {
    stage = name;
    try {
      return fn();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(config.name, run, stage, e.what());
    }
  };

  const Dataset ds = guarded("generate", [&] { return generate(config.dataset, seed); });
  const SplitIndices idx =
      guarded("split", [&] { return split(ds, config.train_fraction, seed ^ kSplitSalt); });
  const Dataset train_set = subset(ds, idx.train);
  const Dataset test_set = subset(ds, idx.test);

  Matrix Xtr = train_set.X;
  Matrix Xte = test_set.X;
  guarded("reduce", [&] {
    ReducedDataset r = prepare_features(config, Xtr, Xte, seed);
    Xtr = std::move(r.train);
    Xte = std::move(r.test);
  });

  const std::uint64_t model_seed = seed ^ kModelSalt;
  const int width = static_cast<int>(Xtr.cols());
  std::vector<int> predictions = guarded("train", [&]() -> std::vector<int> {
    switch (config.model) {
      case ModelKind::QNN: {
        QnnConfig q = config.qnn;
        q.n_qubits = width;
        TrainSettings t = config.qnn_training;
        t.seed = model_seed;
        const QnnTrainResult fit = train(q, t, Xtr, train_set.y);
        stage = "predict";
        return predict(q, fit.params, Xte);
      }
      case ModelKind::QSVC: {
        KernelConfig k = config.kernel;
        k.n_qubits = width;
        const std::vector<int> ypm = to_pm(train_set.y);
        KernelParams params = init_params(k, model_seed);
        if (k.trainable && config.kernel_training.iterations > 0) {
          KernelTrainSettings t = config.kernel_training;
          t.seed = model_seed;
          params = train_kernel(k, params, Xtr, ypm, t).params;
        }
        const Matrix K = gram(k, params.values, Xtr);
        const SvcModel model = fit_precomputed(K, ypm, config.svc);
        stage = "predict";
        const Matrix Kt = cross_gram(k, params.values, Xte, Xtr);
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(Kt.rows()));
        for (Eigen::Index i = 0; i < Kt.rows(); ++i) out.push_back(predict(model, row_span(Kt, i)) > 0 ? 1 : 0);
        return out;
      }
      case ModelKind::ClassicalSVC: {
        const std::vector<int> ypm = to_pm(train_set.y);
        const double gamma = config.svc_gamma.value_or(rbf_gamma_scale(Xtr));
        const SvcModel model = fit_rbf(Xtr, ypm, gamma, config.svc);
        stage = "predict";
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(Xte.rows()));
        for (Eigen::Index i = 0; i < Xte.rows(); ++i)
          out.push_back(predict_features(model, row_span(Xte, i)) > 0 ? 1 : 0);
        return out;
      }
      case ModelKind::CNN: {
        CnnSettings s = config.cnn;
        s.seed = model_seed;
        return train_cnn_baseline(Xtr, train_set.y, Xte, s);
      }
    }
    throw ConfigError("unknown model kind");
  });

  RunRecord record;
  record.run = run;
  record.seed = seed;
  record.metrics = guarded("evaluate", [&] { return compute_metrics(predictions, test_set.y); });
  return record;
}

MetricsReport mean_metrics(const std::vector<RunRecord>& runs) {
  MetricsReport m;
  if (runs.empty()) return m;
  for (const auto& r : runs) {
    m.accuracy += r.metrics.accuracy;
    m.precision += r.metrics.precision;
    m.recall += r.metrics.recall;
    m.f1 += r.metrics.f1;
    m.tp += r.metrics.tp;
    m.fp += r.metrics.fp;
    m.fn += r.metrics.fn;
    m.tn += r.metrics.tn;
  }
  const double n = static_cast<double>(runs.size());
  m.accuracy /= n;
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::uint64_t master_seed) {
  validate(config);
  ExperimentResult result;
  result.config = config;
  for (int r = 0; r < config.repeats; ++r) result.runs.push_back(run_single(config, r, master_seed));
  result.mean = mean_metrics(result.runs);
  return result;
}

std::vector<ExperimentResult> run_suite(const Suite& suite, std::uint64_t master_seed,
                                        int parallel) {
  struct Job {
    std::size_t experiment;
    int run;
  };
  std::vector<Job> jobs;
  std::vector<ExperimentResult> results(suite.experiments.size());
  for (std::size_t e = 0; e < suite.experiments.size(); ++e) {
    validate(suite.experiments[e]);
    results[e].config = suite.experiments[e];
    results[e].runs.resize(static_cast<std::size_t>(suite.experiments[e].repeats));
    for (int r = 0; r < suite.experiments[e].repeats; ++r) jobs.push_back({e, r});
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_job = jobs.size();
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job job = jobs[j];
      try {
        results[job.experiment].runs[static_cast<std::size_t>(job.run)] =
            run_single(suite.experiments[job.experiment], job.run, master_seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        // Report the earliest failing job so the message does not depend on timing.
        if (j < error_job) {
          error_job = j;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  const int threads = std::max(1, std::min<int>(parallel, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  for (auto& r : results) r.mean = mean_metrics(r.runs);
  return results;
}

// ---------------------------------------------------------------------------
// Output.

std::string results_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream os;
  os << kResultsHeader << '\n';
  for (const auto& res : results) {
    const std::string prefix = csv_prefix(res.config);
    auto row = [&](const std::string& run, const MetricsReport& m, std::uint64_t seed) {
      os << prefix << ',' << run << ',' << fmt(m.accuracy) << ',' << fmt(m.precision) << ','
         << fmt(m.recall) << ',' << fmt(m.f1) << ',' << seed << '\n';
    };
    for (const auto& r : res.runs) row(std::to_string(r.run), r.metrics, r.seed);
    row("mean", res.mean, master_of(res));
  }
  return os.str();
}

std::string results_json(const std::vector<ExperimentResult>& results) {
  json rows = json::array();
  for (const auto& res : results) {
    const auto& c = res.config;
    const int width = model_width(c);
    const bool quantum = c.model == ModelKind::QNN || c.model == ModelKind::QSVC;
    auto row = [&](json run, const MetricsReport& m, std::uint64_t seed) {
      rows.push_back({{"dataset", std::string(to_string(c.dataset.kind))},
                      {"reduction", reduction_label(c)},
                      {"target_dim", width},
                      {"model", std::string(to_string(c.model))},
                      {"ansatz", ansatz_label(c)},
                      {"embedding", embedding_label(c)},
                      {"n_qubits", quantum ? width : 0},
                      {"run", std::move(run)},
                      {"accuracy", std::stod(fmt(m.accuracy))},
                      {"precision", std::stod(fmt(m.precision))},
                      {"recall", std::stod(fmt(m.recall))},
                      {"f1", std::stod(fmt(m.f1))},
                      {"seed", seed}});
    };
    for (const auto& r : res.runs) row(r.run, r.metrics, r.seed);
    row("mean", res.mean, master_of(res));
  }
  return json{{"schema_version", kSuiteSchemaVersion}, {"rows", rows}}.dump(2) + "\n";
}

std::string summary_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream os;
  os << "experiment,dataset,reduction,target_dim,model,ansatz,embedding,n_qubits,repeats,accuracy,"
        "precision,recall,f1\n";
  for (const auto& res : results) {
    const auto& m = res.mean;
    os << res.config.name << ',' << csv_prefix(res.config) << ',' << res.runs.size() << ','
       << fmt(m.accuracy) << ',' << fmt(m.precision) << ',' << fmt(m.recall) << ',' << fmt(m.f1)
       << '\n';
  }
  return os.str();
}

std::string comparison_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream os;
  os << "dataset,reduction,target_dim,qsvc_experiment,svc_experiment,qsvc_accuracy,svc_accuracy,"
        "delta,abs_delta\n";
  for (const auto& q : results) {
    if (q.config.model != ModelKind::QSVC) continue;
    const std::string key = upstream_key(q.config);
    for (const auto& s : results) {
      if (s.config.model != ModelKind::ClassicalSVC || upstream_key(s.config) != key ||
          master_of(s) != master_of(q)) {
        continue;
      }
      const double delta = q.mean.accuracy - s.mean.accuracy;
      os << to_string(q.config.dataset.kind) << ',' << reduction_label(q.config) << ','
         << model_width(q.config) << ',' << q.config.name << ',' << s.config.name << ','
         << fmt(q.mean.accuracy) << ',' << fmt(s.mean.accuracy) << ',' << fmt(delta) << ','
         << fmt(std::abs(delta)) << '\n';
      break;
    }
  }
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_outputs(const std::vector<ExperimentResult>& results, const RunMetadata& meta,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / "results.csv", results_csv(results));
  write_file(dir / "results.json", results_json(results));
  write_file(dir / "summary.csv", summary_csv(results));
  write_file(dir / "comparison.csv", comparison_csv(results));
  json m{{"suite", meta.suite_path},
         {"master_seed", meta.master_seed},
         {"started_at", meta.started_at},
         {"finished_at", meta.finished_at},
         {"experiments", results.size()}};
  write_file(dir / "metadata.json", m.dump(2) + "\n");
}

}  // namespace qdr
