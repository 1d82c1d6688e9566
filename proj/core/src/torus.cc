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

#include "torus_secagg/torus.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "torus_secagg/errors.h"

namespace torus_secagg {
namespace {

// x - floor(x) can round up to exactly 1.0 for tiny negative x; on the torus
// that point is 0.
inline double WrapUnchecked(double x) {
  const double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

inline double ToPrecision(double w, Precision precision) {
  if (precision == Precision::kFloat64) return w;
  const double rounded = static_cast<double>(static_cast<float>(w));
  return rounded >= 1.0 ? 0.0 : rounded;
}

void CheckSameLength(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": length mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double Wrap(double x) {
  if (!std::isfinite(x)) throw DomainError("Wrap: non-finite input");
  return WrapUnchecked(x);
}

double Wrap(double x, Precision precision) {
  return ToPrecision(Wrap(x), precision);
}

double UnwrapSigned(double t) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw DomainError("UnwrapSigned: input outside [0,1)");
  }
  return t < 0.5 ? t : t - 1.0;
}

TorusVector::TorusVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0 && v < 1.0)) {
      throw DomainError("TorusVector: entry outside [0,1)");
    }
  }
}

TorusVector TorusVector::FromReals(std::span<const double> reals,
                                   Precision precision) {
  std::vector<double> out(reals.size());
  for (std::size_t i = 0; i < reals.size(); ++i) {
    out[i] = Wrap(reals[i], precision);
  }
  return TorusVector(Trusted{}, std::move(out));
}

TorusVector TorusVector::Zeros(std::size_t m) {
  return TorusVector(Trusted{}, std::vector<double>(m, 0.0));
}

TorusVector TorusAdd(const TorusVector& a, const TorusVector& b,
                     Precision precision) {
  CheckSameLength(a.size(), b.size(), "TorusAdd");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ToPrecision(WrapUnchecked(a.values_[i] + b.values_[i]), precision);
  }
  return TorusVector(TorusVector::Trusted{}, std::move(out));
}

TorusVector TorusSub(const TorusVector& a, const TorusVector& b,
                     Precision precision) {
  CheckSameLength(a.size(), b.size(), "TorusSub");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ToPrecision(WrapUnchecked(a.values_[i] - b.values_[i]), precision);
  }
  return TorusVector(TorusVector::Trusted{}, std::move(out));
}

TorusVector TorusSum(std::span<const TorusVector> vectors,
                     Precision precision, OpTally* tally) {
  if (vectors.empty()) throw ConfigError("TorusSum: no vectors");
  TorusVector acc = vectors.front();
  for (std::size_t k = 1; k < vectors.size(); ++k) {
    acc = TorusAdd(acc, vectors[k], precision);
    if (tally != nullptr) tally->additions += acc.size();
  }
  return acc;
}

ScalingConfig::ScalingConfig(double scaling_factor, int num_clients,
                             double range_bound, bool strict)
    : scaling_factor_(scaling_factor),
      num_clients_(num_clients),
      range_bound_(range_bound) {
  if (!(scaling_factor > 0.0) || !std::isfinite(scaling_factor)) {
    throw ConfigError("ScalingConfig: L must be > 0");
  }
  if (num_clients < 2) throw ConfigError("ScalingConfig: K must be >= 2");
  if (!(range_bound > 0.0) || !std::isfinite(range_bound)) {
    throw ConfigError("ScalingConfig: R must be > 0");
  }
  if (strict && !IsSignSafe()) {
    throw ConfigError("ScalingConfig: strict mode requires L >= 2*K*R");
  }
}

ScalingConfig ScalingConfig::ForMode(ScalingMode mode, int num_clients,
                                     double range_bound) {
  return ScalingConfig(ChooseScalingFactor(num_clients, range_bound, mode),
                       num_clients, range_bound,
                       mode == ScalingMode::kStrict);
}

bool ScalingConfig::IsSignSafe() const {
  return scaling_factor_ >= 2.0 * num_clients_ * range_bound_;
}

double ChooseScalingFactor(int num_clients, double range_bound,
                           ScalingMode mode) {
  if (num_clients < 2) throw ConfigError("ChooseScalingFactor: K must be >= 2");
  if (!(range_bound > 0.0)) {
    throw ConfigError("ChooseScalingFactor: R must be > 0");
  }
  const double k = static_cast<double>(num_clients);
  switch (mode) {
    case ScalingMode::kLinear:
      return k * std::max(range_bound, 1.0);
    case ScalingMode::kStrict:
      return 2.0 * k * range_bound;
  }
  return 2.0 * k * range_bound;
}

TorusVector ScaleToTorus(const ModelParams& theta, double scaling_factor,
                         Precision precision, OpTally* tally) {
  if (!(scaling_factor > 0.0) || !std::isfinite(scaling_factor)) {
    throw ConfigError("ScaleToTorus: L must be > 0");
  }
  std::vector<double> scaled(theta.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (!std::isfinite(theta[i])) {
      throw DomainError("ScaleToTorus: non-finite parameter");
    }
    scaled[i] = theta[i] / scaling_factor;
  }
  if (tally != nullptr) tally->multiplications += scaled.size();
  return TorusVector::FromReals(scaled, precision);
}

ModelParams RecoverReal(const TorusVector& aggregate,
                        const ScalingConfig& config) {
  return RecoverReal(aggregate, config.scaling_factor());
}

ModelParams RecoverReal(const TorusVector& aggregate, double scaling_factor) {
  if (!(scaling_factor > 0.0)) throw ConfigError("RecoverReal: L must be > 0");
  std::vector<double> out(aggregate.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = scaling_factor * UnwrapSigned(aggregate[i]);
  }
  return ModelParams(std::move(out));
}

}  // namespace torus_secagg
