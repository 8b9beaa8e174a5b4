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

#include "qdimred/metrics.hpp"

#include "qdimred/error.hpp"

namespace qdr {

MetricsReport compute_metrics(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size() || truth.empty()) {
    throw UsageError("metrics need equal, nonzero prediction and truth lengths");
  }
  MetricsReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int p = predictions[i], t = truth[i];
    if ((p != 0 && p != 1) || (t != 0 && t != 1)) throw UsageError("metric labels must be 0 or 1");
    if (p == 1 && t == 1) ++r.tp;
    else if (p == 1) ++r.fp;
    else if (t == 1) ++r.fn;
    else ++r.tn;
  }
  const auto ratio = [](long num, long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.accuracy = ratio(r.tp + r.tn, static_cast<long>(truth.size()));
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.f1 = r.precision + r.recall == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

}  // namespace qdr
