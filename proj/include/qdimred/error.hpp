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

#include <stdexcept>
#include <string>

namespace qdr {

// Every failure raised by the library derives from Error so callers can catch
// one type at the pipeline boundary and still tell the categories apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-range sizes, infeasible generator settings, bad hyperparameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector / matrix / register dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid gate construction: wrong arity, colliding or bad wires.
class GateError : public Error {
 public:
  using Error::Error;
};

// Misuse of an API: empty batches, wrong label domain, missing forward cache.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A vector that cannot be normalized (all zeros).
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Malformed suite / config / CSV input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Iterative solver gave up. Carries no payload; callers that want the partial
// result use the non-throwing entry points.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdr
