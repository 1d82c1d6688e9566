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

#ifndef TORUS_SECAGG_TORUS_H_
#define TORUS_SECAGG_TORUS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torus_secagg/model_params.h"

namespace torus_secagg {

// Working precision of torus arithmetic. kFloat32 emulates a 32-bit model
// pipeline by rounding every torus result to float before re-wrapping.
enum class Precision { kFloat64, kFloat32 };

// Arithmetic operation counts, accumulated by the operations that accept a
// tally. Scaling by 1/L counts as one multiplication per entry.
struct OpTally {
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
};

// x - floor(x), always in [0,1). Exact negative integers map to 0.
// Throws DomainError for non-finite x.
double Wrap(double x);

// Precision-aware wrap: in kFloat32 mode the wrapped value is rounded to
// float and re-wrapped (rounding can land on 1.0).
double Wrap(double x, Precision precision);

// Signed representative of a torus element: t for t < 0.5, t - 1 otherwise.
// Throws DomainError unless 0 <= t < 1.
double UnwrapSigned(double t);

// Element of T^m. Every entry lies in [0,1); length is fixed at
// construction.
class TorusVector {
 public:
  // Throws DomainError if an entry lies outside [0,1).
  explicit TorusVector(std::vector<double> values);

  // Wraps arbitrary finite reals onto the torus.
  static TorusVector FromReals(std::span<const double> reals,
                               Precision precision = Precision::kFloat64);

  static TorusVector Zeros(std::size_t m);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const TorusVector&, const TorusVector&) = default;

 private:
  struct Trusted {};
  TorusVector(Trusted, std::vector<double> values)
      : values_(std::move(values)) {}
  friend TorusVector TorusAdd(const TorusVector&, const TorusVector&,
                              Precision);
  friend TorusVector TorusSub(const TorusVector&, const TorusVector&,
                              Precision);

  std::vector<double> values_;
};

// Entrywise wrap(a + b) / wrap(a - b). Throws ShapeError on length mismatch.
TorusVector TorusAdd(const TorusVector& a, const TorusVector& b,
                     Precision precision = Precision::kFloat64);
TorusVector TorusSub(const TorusVector& a, const TorusVector& b,
                     Precision precision = Precision::kFloat64);

// Sum of all vectors, accumulated in ascending index order with a wrap after
// every addition. Throws ShapeError on length mismatch, ConfigError if empty.
TorusVector TorusSum(std::span<const TorusVector> vectors,
                     Precision precision = Precision::kFloat64,
                     OpTally* tally = nullptr);

// How the scaling factor is derived from (K, R).
//   kLinear:  L = K * max(R, 1). Recovery is exact while |sum| < L/2.
//   kStrict: L = 2 * K * R. Recovery is exact for every admissible input.
enum class ScalingMode { kLinear, kStrict };

// Scaling factor L with the client count K and update bound R it was chosen
// for.
class ScalingConfig {
 public:
  // Throws ConfigError unless L > 0, K >= 2 and R > 0, and (when `strict`)
  // L >= 2*K*R.
  ScalingConfig(double scaling_factor, int num_clients, double range_bound,
                bool strict = false);

  // L picked by ChooseScalingFactor for the given mode.
  static ScalingConfig ForMode(ScalingMode mode, int num_clients,
                               double range_bound);

  double scaling_factor() const { return scaling_factor_; }
  int num_clients() const { return num_clients_; }
  double range_bound() const { return range_bound_; }

  // True when L >= 2*K*R, i.e. recovery is provably unambiguous.
  bool IsSignSafe() const;

 private:
  double scaling_factor_;
  int num_clients_;
  double range_bound_;
};

// Throws ConfigError unless K >= 2 and R > 0.
double ChooseScalingFactor(int num_clients, double range_bound,
                           ScalingMode mode);

// theta / L mod 1 entrywise. Throws ConfigError for L <= 0 and DomainError
// for non-finite parameters.
TorusVector ScaleToTorus(const ModelParams& theta, double scaling_factor,
                         Precision precision = Precision::kFloat64,
                         OpTally* tally = nullptr);

// L * UnwrapSigned(z[i]) entrywise: the real sum encoded by an aggregate,
// provided every |sum_i| / L < 0.5. Larger sums come back wrapped. The
// result has a single flat tensor; callers re-attach their model layout.
ModelParams RecoverReal(const TorusVector& aggregate,
                        const ScalingConfig& config);
ModelParams RecoverReal(const TorusVector& aggregate, double scaling_factor);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_TORUS_H_
