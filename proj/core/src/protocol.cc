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

#include "torus_secagg/protocol.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include "torus_secagg/errors.h"
#include "torus_secagg/network.h"

namespace torus_secagg {
namespace {

using MaskMessage = std::variant<TorusVector, FieldVector, Seed256>;
using Submission = std::variant<TorusVector, FieldVector, ModelParams>;

void CheckParticipants(std::span<const ClientState> clients,
                       const ServerState& server) {
  const int k = server.num_clients;
  if (k < 2) throw ConfigError("RunRound: server expects K >= 2 clients");
  if (clients.size() != static_cast<std::size_t>(k)) {
    throw ProtocolAbort("RunRound: " + std::to_string(clients.size()) +
                        " of " + std::to_string(k) +
                        " clients present; every client must participate");
  }
  for (std::size_t i = 0; i < clients.size(); ++i) {
    if (clients[i].id != static_cast<int>(i) + 1) {
      throw ProtocolAbort("RunRound: client ids must be 1..K in order");
    }
    if (clients[i].theta.size() != server.global.size()) {
      throw ShapeError("RunRound: client " + std::to_string(clients[i].id) +
                       " model length differs from the global model");
    }
  }
}

// theta_k, pre-scaled by K n_k / n when shard sizes differ.
std::vector<ModelParams> WeightedInputs(std::span<const ClientState> clients,
                                        std::uint64_t* multiplications) {
  std::vector<ModelParams> inputs;
  inputs.reserve(clients.size());
  const bool equal = std::all_of(
      clients.begin(), clients.end(), [&](const ClientState& c) {
        return c.shard_size == clients.front().shard_size;
      });
  if (equal) {
    for (const auto& c : clients) inputs.push_back(c.theta);
    return inputs;
  }
  double total = 0.0;
  for (const auto& c : clients) total += static_cast<double>(c.shard_size);
  const double k = static_cast<double>(clients.size());
  for (const auto& c : clients) {
    const double factor = k * static_cast<double>(c.shard_size) / total;
    std::vector<double> v(c.theta.values().begin(), c.theta.values().end());
    for (double& x : v) x *= factor;
    inputs.push_back(c.theta.WithValues(std::move(v)));
  }
  *multiplications = clients.front().theta.size();
  return inputs;
}

std::vector<double> AscendingSum(std::span<const ModelParams> inputs) {
  std::vector<double> sum(inputs.front().values().begin(),
                          inputs.front().values().end());
  for (std::size_t k = 1; k < inputs.size(); ++k) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += inputs[k][i];
  }
  return sum;
}

std::vector<double> DivideBy(std::vector<double> v, int k) {
  for (double& x : v) x /= static_cast<double>(k);
  return v;
}

template <typename Vec>
struct PeerMasks {
  std::vector<Vec> added;       // z_{k,j}, j = k+1..K
  std::vector<Vec> subtracted;  // z_{j,k}, j = 1..k-1
};

// Pairwise mask exchange. Client k derives z_{k,j} for every j > k and sends
// it (or its seed) to j.
template <typename Vec, typename Expand>
std::vector<PeerMasks<Vec>> ExchangeMasks(int num_clients,
                                          std::uint64_t dimension,
                                          const MaskSeed& seed,
                                          MaskExchange exchange,
                                          TrafficMeter& meter,
                                          Expand expand) {
  Mailboxes<MaskMessage> links(num_clients, meter);
  std::vector<PeerMasks<Vec>> peers(static_cast<std::size_t>(num_clients) + 1);
  for (int k = 1; k <= num_clients; ++k) {
    for (int j = k + 1; j <= num_clients; ++j) {
      const Seed256 pair_seed = seed.PairSeed(k, j);
      Vec mask = expand(pair_seed);
      if (exchange == MaskExchange::kSeed) {
        links.Send(k, j, std::make_shared<const MaskMessage>(pair_seed),
                   kSeedSymbols);
      } else {
        links.Send(k, j, std::make_shared<const MaskMessage>(mask), dimension);
      }
      peers[k].added.push_back(std::move(mask));
    }
  }
  for (int k = 1; k <= num_clients; ++k) {
    for (const auto& env : links.Drain(k)) {
      if (env.from >= k) {
        throw std::logic_error("mask received from a higher-indexed client");
      }
      if (const auto* s = std::get_if<Seed256>(env.payload.get())) {
        peers[k].subtracted.push_back(expand(*s));
      } else {
        peers[k].subtracted.push_back(std::get<Vec>(*env.payload));
      }
    }
  }
  return peers;
}

std::uint64_t MaskStorage(int num_clients, std::uint64_t dimension,
                          MaskExchange exchange) {
  const auto others = static_cast<std::uint64_t>(num_clients - 1);
  return others * (exchange == MaskExchange::kSeed ? kSeedSymbols : dimension);
}

template <typename Vec>
std::vector<const Vec*> Pointers(const std::vector<Vec>& vectors) {
  std::vector<const Vec*> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(&v);
  return out;
}

// Server inbox in ascending sender order; rejects anything but `Vec`.
template <typename Vec>
std::vector<Vec> ServerReceive(Mailboxes<Submission>& uplink) {
  auto envelopes = uplink.Drain(kServerEndpoint);
  std::stable_sort(envelopes.begin(), envelopes.end(),
                   [](const auto& a, const auto& b) { return a.from < b.from; });
  std::vector<Vec> out;
  out.reserve(envelopes.size());
  for (const auto& env : envelopes) {
    const auto* v = std::get_if<Vec>(env.payload.get());
    if (v == nullptr) {
      throw std::logic_error("server received a submission of the wrong kind");
    }
    out.push_back(*v);
  }
  return out;
}

double EstimateRange(std::span<const ModelParams> inputs) {
  double r = 0.0;
  for (const auto& theta : inputs) r = std::max(r, theta.InfinityNorm());
  return r > 0.0 ? r : 1.0;
}

double ResolveScalingFactor(const TorusOptions& opts, int num_clients,
                            double range_bound) {
  switch (opts.policy) {
    case ScalingPolicy::kFixed:
      if (!(opts.scaling_factor > 0.0) || !std::isfinite(opts.scaling_factor)) {
        throw ConfigError("RunRound: L must be > 0");
      }
      return opts.scaling_factor;
    case ScalingPolicy::kLinear:
      return ChooseScalingFactor(num_clients, range_bound, ScalingMode::kLinear);
    case ScalingPolicy::kStrict:
      return ChooseScalingFactor(num_clients, range_bound,
                                 ScalingMode::kStrict);
  }
  throw ConfigError("RunRound: unknown scaling policy");
}

std::size_t CountTorusOverflows(std::span<const double> exact_sum,
                                double scaling_factor) {
  std::size_t count = 0;
  for (double s : exact_sum) {
    const double t = s / scaling_factor;
    if (t < -0.5 || t >= 0.5) ++count;
  }
  return count;
}

}  // namespace

std::string_view ToString(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::kPlain:
      return "plain";
    case AggregationMode::kTorus:
      return "torus";
    case AggregationMode::kFiniteField:
      return "finite_field";
  }
  return "unknown";
}

AggregationMode ParseAggregationMode(std::string_view text) {
  if (text == "plain") return AggregationMode::kPlain;
  if (text == "torus") return AggregationMode::kTorus;
  if (text == "finite_field" || text == "ff") {
    return AggregationMode::kFiniteField;
  }
  throw ConfigError("unknown aggregation mode '" + std::string(text) + "'");
}

std::string_view ToString(ScalingPolicy policy) {
  switch (policy) {
    case ScalingPolicy::kFixed:
      return "fixed";
    case ScalingPolicy::kLinear:
      return "linear";
    case ScalingPolicy::kStrict:
      return "strict";
  }
  return "unknown";
}

ScalingPolicy ParseScalingPolicy(std::string_view text) {
  if (text == "fixed") return ScalingPolicy::kFixed;
  if (text == "linear") return ScalingPolicy::kLinear;
  if (text == "strict") return ScalingPolicy::kStrict;
  throw ConfigError("unknown scaling policy '" + std::string(text) + "'");
}

RoundResult RunRound(std::span<const ClientState> clients,
                     const ServerState& server, AggregationMode mode,
                     const MaskSeed& seed) {
  CheckParticipants(clients, server);
  const int num_clients = server.num_clients;
  const std::size_t m = server.global.size();
  const auto m64 = static_cast<std::uint64_t>(m);
  const AggregationConfig& cfg = server.config;
  const MaskSeed round_seed = seed.ForRound(static_cast<std::uint64_t>(server.round));

  RoundTranscript t;
  t.round = server.round;
  t.mode = mode;
  t.num_clients = num_clients;
  t.dimension = m;

  std::uint64_t weighting_mults = 0;
  const std::vector<ModelParams> inputs = WeightedInputs(clients, &weighting_mults);
  const std::vector<double> exact_sum = AscendingSum(inputs);
  t.plaintext_average = ModelParams(DivideBy(exact_sum, num_clients));

  TrafficMeter meter(num_clients);
  Mailboxes<Submission> uplink(num_clients, meter);
  std::vector<OpTally> tallies(static_cast<std::size_t>(num_clients) + 1);
  std::uint64_t mask_storage = 0;
  std::vector<double> recovered_sum;
  RoundCounters& c = t.counters;

  switch (mode) {
    case AggregationMode::kPlain: {
      for (int k = 1; k <= num_clients; ++k) {
        uplink.Send(k, kServerEndpoint,
                    std::make_shared<const Submission>(inputs[k - 1]), m64);
      }
      const auto received = ServerReceive<ModelParams>(uplink);
      recovered_sum = AscendingSum(received);
      c.server_additions = m64 * static_cast<std::uint64_t>(num_clients - 1);
      break;
    }
    case AggregationMode::kTorus: {
      const TorusOptions& opts = cfg.torus;
      t.range_bound = opts.range_bound.value_or(EstimateRange(inputs));
      t.scaling_factor = ResolveScalingFactor(opts, num_clients, t.range_bound);
      const auto peers = ExchangeMasks<TorusVector>(
          num_clients, m64, round_seed, cfg.exchange, meter,
          [&](const Seed256& s) { return ExpandPairMask(s, m, opts.precision); });
      mask_storage = MaskStorage(num_clients, m64, cfg.exchange);
      for (int k = 1; k <= num_clients; ++k) {
        OpTally& tally = tallies[k];
        const auto added = Pointers(peers[k].added);
        const auto subtracted = Pointers(peers[k].subtracted);
        TorusVector p = ApplyMasks(
            ScaleToTorus(inputs[k - 1], t.scaling_factor, opts.precision, &tally),
            added, subtracted, opts.precision, &tally);
        t.torus_submissions.push_back(p);
        uplink.Send(k, kServerEndpoint,
                    std::make_shared<const Submission>(std::move(p)), m64);
      }
      const auto received = ServerReceive<TorusVector>(uplink);
      OpTally server_tally;
      TorusVector aggregate = TorusSum(received, opts.precision, &server_tally);
      c.server_additions = server_tally.additions;
      recovered_sum = RecoverReal(aggregate, t.scaling_factor).flat();
      c.server_postprocess_ops += m64;
      t.torus_aggregate = std::move(aggregate);
      t.overflow_count = CountTorusOverflows(exact_sum, t.scaling_factor);
      break;
    }
    case AggregationMode::kFiniteField: {
      const FieldParams& params = cfg.field;
      t.prime = params.prime();
      t.precision_degree = params.precision();
      const auto peers = ExchangeMasks<FieldVector>(
          num_clients, m64, round_seed, cfg.exchange, meter,
          [&](const Seed256& s) {
            return ExpandFieldPairMask(s, m, params.prime());
          });
      mask_storage = MaskStorage(num_clients, m64, cfg.exchange);
      for (int k = 1; k <= num_clients; ++k) {
        OpTally& tally = tallies[k];
        std::size_t wrapped = 0;
        const auto added = Pointers(peers[k].added);
        const auto subtracted = Pointers(peers[k].subtracted);
        FieldVector p = FieldApplyMasks(
            EncodeVector(inputs[k - 1], params, &wrapped, &tally), added,
            subtracted, &tally);
        t.encode_overflow_count += wrapped;
        t.field_submissions.push_back(p);
        uplink.Send(k, kServerEndpoint,
                    std::make_shared<const Submission>(std::move(p)), m64);
      }
      const auto received = ServerReceive<FieldVector>(uplink);
      OpTally server_tally;
      FieldVector aggregate = FieldSum(received, &server_tally);
      c.server_additions = server_tally.additions;
      recovered_sum = DecodeVector(aggregate, params).flat();
      c.server_postprocess_ops += m64;
      t.field_aggregate = std::move(aggregate);
      t.overflow_count = CountSumOverflows(inputs, params);
      break;
    }
  }

  t.recovered_sum = server.global.WithValues(recovered_sum);
  std::vector<double> average = DivideBy(std::move(recovered_sum), num_clients);
  c.server_postprocess_ops += m64;
  t.recovered_average = server.global.WithValues(average);

  ServerState next = server;
  next.global = t.recovered_average;
  next.round = server.round + 1;

  Mailboxes<ModelParams> downlink(num_clients, meter);
  const auto broadcast = std::make_shared<const ModelParams>(next.global);
  for (int k = 1; k <= num_clients; ++k) {
    downlink.Send(kServerEndpoint, k, broadcast, m64);
    downlink.Drain(k);
  }

  for (int k = 1; k <= num_clients; ++k) {
    c.client_multiplications =
        std::max(c.client_multiplications,
                 tallies[k].multiplications + weighting_mults);
    c.client_additions = std::max(c.client_additions, tallies[k].additions);
    c.client_comm_symbols =
        std::max(c.client_comm_symbols, meter.client_symbols(k));
  }
  c.server_comm_symbols = meter.server_symbols();
  c.client_storage_symbols = mask_storage + m64;
  c.server_storage_symbols = m64;  // running accumulator

  return {std::move(next), std::move(t)};
}

RoundCounters ComplexityCounters(int num_clients, std::size_t dimension,
                                 AggregationMode mode, MaskExchange exchange) {
  if (num_clients < 2) throw ConfigError("ComplexityCounters: K must be >= 2");
  if (dimension < 1) throw ConfigError("ComplexityCounters: m must be >= 1");
  ServerState server;
  server.global = ModelParams(std::vector<double>(dimension, 0.0));
  server.num_clients = num_clients;
  server.config.exchange = exchange;
  server.config.torus.policy = ScalingPolicy::kFixed;
  server.config.torus.scaling_factor = static_cast<double>(num_clients);
  std::vector<ClientState> clients;
  for (int k = 1; k <= num_clients; ++k) {
    clients.push_back({k, server.global, 1, nullptr});
  }
  return RunRound(clients, server, mode, MaskSeed::FromInteger(0))
      .transcript.counters;
}

ModelParams WeightedAverage(std::span<const ModelParams> updates,
                            std::span<const double> weights) {
  if (updates.empty()) throw ConfigError("WeightedAverage: no updates");
  if (updates.size() != weights.size()) {
    throw ShapeError("WeightedAverage: one weight per update required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("WeightedAverage: negative weight");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ConfigError("WeightedAverage: weights must sum to 1");
  }
  const std::size_t m = updates.front().size();
  std::vector<double> out(m, 0.0);
  for (std::size_t k = 0; k < updates.size(); ++k) {
    if (updates[k].size() != m) {
      throw ShapeError("WeightedAverage: updates differ in length");
    }
    for (std::size_t i = 0; i < m; ++i) out[i] += weights[k] * updates[k][i];
  }
  return updates.front().WithValues(std::move(out));
}

}  // namespace torus_secagg
