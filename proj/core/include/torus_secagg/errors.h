// Copyright 2026 The torus_secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TORUS_SECAGG_ERRORS_H_
#define TORUS_SECAGG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace torus_secagg {

// Root of the library's exception hierarchy. Each subclass corresponds to one
// error category of the public operations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (non-finite input,
// torus value outside [0,1), client index out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters: L <= 0, K < 2, weights not summing to one, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Vector lengths or model shapes that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed IDX header (bad magic, unsupported type byte).
class FormatError : public Error {
 public:
  using Error::Error;
};

// IDX payload shorter than its header promises.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Empty shard, missing dataset files.
class DataError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A round could not complete because a client submission is missing.
class ProtocolAbort : public Error {
 public:
  using Error::Error;
};

// Metric undefined for the given input (zero vector, zero variance).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_ERRORS_H_
