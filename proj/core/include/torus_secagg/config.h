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

#ifndef TORUS_SECAGG_CONFIG_H_
#define TORUS_SECAGG_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torus_secagg/finite_field.h"
#include "torus_secagg/protocol.h"

namespace torus_secagg {

// L written relative to K: "1" -> 1, "K" -> K, "10K" -> 10K, "0.5K" -> K/2.
struct ScalingExpr {
  double coefficient = 1.0;
  bool times_k = false;

  double Evaluate(int num_clients) const {
    return times_k ? coefficient * num_clients : coefficient;
  }
  std::string ToString() const;
  friend bool operator==(const ScalingExpr&, const ScalingExpr&) = default;
};

// Throws ConfigError on malformed text.
ScalingExpr ParseScalingExpr(std::string_view text);

struct ExperimentConfig {
  std::string name = "custom";

  // Data.
  std::string dataset = "mnist";  // mnist | synth
  std::string mnist_dir;          // empty: DefaultMnistDir()
  std::size_t train_samples = 1000;
  std::size_t test_samples = 1000;
  int synth_classes = 10;
  std::size_t synth_features = 20;
  double synth_separation = 3.0;

  // Model.
  std::string model = "softmax";  // softmax | mlp
  std::size_t hidden = 32;

  // Aggregation. Every (K, mode, L) combination is one experiment cell.
  std::vector<AggregationMode> modes{AggregationMode::kTorus};
  std::vector<int> clients{5};
  ScalingPolicy scaling = ScalingPolicy::kStrict;
  std::vector<ScalingExpr> scaling_factors;  // used with scaling = fixed
  std::optional<double> range_bound;
  std::uint64_t prime = (std::uint64_t{1} << 31) - 1;
  int precision_degree = 7;
  FixedPointBase fixed_point_base = FixedPointBase::kDecimal;
  MaskExchange mask_exchange = MaskExchange::kFullVector;
  int float_precision = 64;  // 32 emulates single-precision torus arithmetic

  // Training.
  int rounds = 10;
  int runs = 3;
  double learning_rate = 0.01;
  std::size_t batch_size = 64;
  int local_epochs = 1;
  double momentum = 0.0;
  double weight_decay = 0.0;

  // Execution.
  std::uint64_t seed = 1;
  bool deterministic = true;
  int threads = 1;
  std::string output = "out";
};

// Parses `key = value` lines; '#' starts a comment; blank lines are skipped.
// Throws ConfigError naming the line for malformed input or duplicate keys.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);

// Applies parsed keys on top of `base`. A "preset" key, if present, is
// resolved first and the remaining keys override it. Throws ConfigError for
// unknown keys and unparsable values.
ExperimentConfig ApplyKeyValues(ExperimentConfig base,
                                const std::map<std::string, std::string>& kv);

ExperimentConfig ParseExperimentConfig(std::string_view text);
// Key-value text that parses back to an equal configuration (the "name" and
// every field are written out; "preset" is not).
std::string FormatExperimentConfig(const ExperimentConfig& cfg);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Every violated constraint, one message each naming the field and the
// constraint (e.g. "clients: K ≥ 2"). Empty iff the config is runnable.
std::vector<std::string> ValidateConfig(const ExperimentConfig& cfg);

// Built-in presets, sorted by name.
std::vector<std::string> PresetNames();
// Throws ConfigError for an unknown name.
ExperimentConfig LoadPreset(std::string_view name);
// The preset's key-value source text.
std::string PresetSource(std::string_view name);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_CONFIG_H_
