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

#ifndef TORUS_SECAGG_PROTOCOL_H_
#define TORUS_SECAGG_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torus_secagg/finite_field.h"
#include "torus_secagg/masking.h"
#include "torus_secagg/model_params.h"
#include "torus_secagg/torus.h"

namespace torus_secagg {

class Dataset;

enum class AggregationMode { kPlain, kTorus, kFiniteField };

std::string_view ToString(AggregationMode mode);
// Accepts "plain", "torus", "finite_field" (also "ff"). Throws ConfigError.
AggregationMode ParseAggregationMode(std::string_view text);

// How a pair's mask reaches the second client: the full m-entry vector, or
// the seed it expands from.
enum class MaskExchange { kFullVector, kSeed };

// kFixed uses `scaling_factor` as given; kLinear and kStrict derive L from R.
enum class ScalingPolicy { kFixed, kLinear, kStrict };

std::string_view ToString(ScalingPolicy policy);
ScalingPolicy ParseScalingPolicy(std::string_view text);

struct TorusOptions {
  ScalingPolicy policy = ScalingPolicy::kStrict;
  // L under kFixed; ignored otherwise.
  double scaling_factor = 0.0;
  // R. When absent it is estimated each round as max_k ||theta_k||_inf from
  // the norms the clients report; an all-zero round falls back to R = 1.
  std::optional<double> range_bound;
  Precision precision = Precision::kFloat64;
};

struct AggregationConfig {
  TorusOptions torus;
  FieldParams field = FieldParams::Mersenne31();
  MaskExchange exchange = MaskExchange::kFullVector;
};

struct ClientState {
  int id = 0;  // 1..K
  ModelParams theta;
  std::size_t shard_size = 0;
  const Dataset* shard = nullptr;
};

struct ServerState {
  ModelParams global;
  int round = 0;
  int num_clients = 0;
  AggregationConfig config;
};

// Cost counters for one round. Client figures are per client (the
// maximum over clients; they coincide for every client in this protocol).
struct RoundCounters {
  std::uint64_t client_multiplications = 0;
  std::uint64_t client_additions = 0;
  std::uint64_t server_additions = 0;
  // Recovery (x L) and averaging (/ K) on the server; kept out of
  // server_additions so that field matches the m(K-1) closed form.
  std::uint64_t server_postprocess_ops = 0;
  std::uint64_t client_comm_symbols = 0;
  std::uint64_t server_comm_symbols = 0;
  std::uint64_t client_storage_symbols = 0;
  std::uint64_t server_storage_symbols = 0;

  std::uint64_t client_compute_ops() const {
    return client_multiplications + client_additions;
  }
  std::uint64_t server_compute_ops() const { return server_additions; }

  friend bool operator==(const RoundCounters&, const RoundCounters&) = default;
};

struct RoundTranscript {
  int round = 0;
  AggregationMode mode = AggregationMode::kPlain;
  int num_clients = 0;
  std::size_t dimension = 0;
  // What the server received, in client order. Only the vector matching the
  // mode is populated.
  std::vector<TorusVector> torus_submissions;
  std::vector<FieldVector> field_submissions;
  std::optional<TorusVector> torus_aggregate;
  std::optional<FieldVector> field_aggregate;
  ModelParams recovered_sum;
  ModelParams recovered_average;
  // Simulator-side oracle: exact average of the (weighted) client vectors.
  ModelParams plaintext_average;
  RoundCounters counters;
  // Coordinates where the aggregate cannot be recovered: the true sum leaves
  // [-L/2, L/2) in torus mode or the balanced field range in finite-field
  // mode. Always 0 in plain mode.
  std::size_t overflow_count = 0;
  // Finite-field only: individual encodings that wrapped.
  std::size_t encode_overflow_count = 0;
  double scaling_factor = 0.0;  // L (torus)
  double range_bound = 0.0;     // R used to choose L (torus)
  std::uint64_t prime = 0;      // p (finite field)
  int precision_degree = 0;     // d (finite field)
};

struct RoundResult {
  ServerState server;
  RoundTranscript transcript;
};

// One aggregation round. Pairwise masks are derived from seed.ForRound(round),
// exchanged over simulated mailboxes, added by each client to its scaled or
// encoded vector, and summed by the server in ascending client order. The
// new global model is recovered_sum / K.
//
// Unequal shard sizes are handled by pre-scaling theta_k by K n_k / n before
// submission, so the average stays the FedAvg weighted average.
//
// Throws ProtocolAbort unless the clients are exactly 1..K with K matching
// the server, ShapeError for a length mismatch with the global model.
RoundResult RunRound(std::span<const ClientState> clients,
                     const ServerState& server, AggregationMode mode,
                     const MaskSeed& seed);

// Counters measured by running a round of zero models of length m.
RoundCounters ComplexityCounters(int num_clients, std::size_t dimension,
                                 AggregationMode mode,
                                 MaskExchange exchange = MaskExchange::kFullVector);

// sum_k w_k theta_k. Throws ConfigError for negative weights or weights not
// summing to 1 within 1e-12, ShapeError for mismatched inputs.
ModelParams WeightedAverage(std::span<const ModelParams> updates,
                            std::span<const double> weights);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_PROTOCOL_H_
