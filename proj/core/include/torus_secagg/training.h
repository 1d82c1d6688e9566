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

#ifndef TORUS_SECAGG_TRAINING_H_
#define TORUS_SECAGG_TRAINING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "torus_secagg/data.h"
#include "torus_secagg/model.h"
#include "torus_secagg/model_params.h"
#include "torus_secagg/protocol.h"
#include "torus_secagg/rng.h"

namespace torus_secagg {

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 64;
  int local_epochs = 1;
  double momentum = 0.0;
  double weight_decay = 0.0;
  int rounds = 10;

  // Throws ConfigError unless lr >= 0 (0 is allowed and makes training a
  // no-op), batch_size >= 1, local_epochs >= 1, momentum in [0, 1),
  // weight_decay >= 0 and rounds >= 0.
  void Validate() const;
};

// cfg.local_epochs passes of minibatch SGD over `shard`, reshuffled each epoch
// from `seed`. The last batch of an epoch may be short. Momentum and weight
// decay follow the usual heavy-ball form:
//   v <- momentum v + grad + weight_decay theta;  theta <- theta - lr v.
// Throws DataError for an empty shard, ShapeError for mismatched shapes and
// DivergenceError when the loss becomes non-finite.
ModelParams LocalTrain(const ModelSpec& spec, const ModelParams& theta,
                       const Dataset& shard, const TrainConfig& cfg,
                       const Seed256& seed);

// Fraction of rows whose argmax prediction equals the label. Throws DataError
// for an empty set and ShapeError for mismatched shapes.
double Evaluate(const ModelSpec& spec, const ModelParams& theta,
                const Dataset& test);

struct FedAvgSetup {
  ModelSpec spec;
  std::span<const Dataset> shards;  // one per client, K = shards.size()
  const Dataset* test = nullptr;
  ModelParams initial;
  AggregationMode mode = AggregationMode::kTorus;
  TrainConfig train;
  AggregationConfig aggregation;
  Seed256 seed;
  // Run a plain-mode twin in lockstep. Both trajectories draw identical
  // per-client training seeds, so aggregation is the only difference.
  bool plain_twin = true;
  // Client training runs on up to this many threads; results do not depend
  // on it.
  int threads = 1;
};

struct HistoryRow {
  int round = 0;  // 1-based
  double accuracy = 0.0;
  double plain_accuracy = 0.0;  // twin's accuracy (equals accuracy in plain mode)
  double cosine_vs_plain = 1.0;
  std::size_t overflow_count = 0;
  std::size_t encode_overflow_count = 0;
  double scaling_factor = 0.0;
  double range_bound = 0.0;
  std::uint64_t prime = 0;
  int precision_degree = 0;
  RoundCounters counters;
};

struct FedAvgHistory {
  ModelParams final_model;
  ModelParams plain_final_model;
  std::vector<HistoryRow> rows;
};

// Seed of client k's local training in a given round.
Seed256 TrainingSeed(const Seed256& root, int client, int round);

// FedAvg for train.rounds rounds: every client trains from the current global
// model on its shard, then RunRound aggregates. With zero rounds the initial
// model is returned unchanged.
FedAvgHistory RunFedAvg(const FedAvgSetup& setup);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_TRAINING_H_
