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

#include "torus_secagg/training.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "torus_secagg/errors.h"
#include "torus_secagg/metrics.h"

namespace torus_secagg {
namespace {

constexpr std::uint64_t kTrainDomain = 0x747261696e2d7367ULL;
constexpr std::uint64_t kMaskRootDomain = 0x6d61736b2d726f6fULL;

// Runs fn(i) for i in [0, n) on up to `threads` threads. The first exception
// is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ModelParams> TrainClients(const FedAvgSetup& setup,
                                      const ModelParams& global, int round) {
  std::vector<ModelParams> out(setup.shards.size());
  ParallelFor(setup.shards.size(), setup.threads, [&](std::size_t i) {
    const int client = static_cast<int>(i) + 1;
    out[i] = LocalTrain(setup.spec, global, setup.shards[i], setup.train,
                        TrainingSeed(setup.seed, client, round));
  });
  return out;
}

std::vector<ClientState> MakeClients(const FedAvgSetup& setup,
                                     std::vector<ModelParams> thetas) {
  std::vector<ClientState> clients;
  clients.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    clients.push_back({static_cast<int>(i) + 1, std::move(thetas[i]),
                       setup.shards[i].size(), &setup.shards[i]});
  }
  return clients;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be >= 0");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (local_epochs < 1) throw ConfigError("local_epochs must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must be in [0, 1)");
  }
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (rounds < 0) throw ConfigError("rounds must be >= 0");
}

ModelParams LocalTrain(const ModelSpec& spec, const ModelParams& theta,
                       const Dataset& shard, const TrainConfig& cfg,
                       const Seed256& seed) {
  cfg.Validate();
  if (shard.empty()) throw DataError("LocalTrain: empty shard");
  spec.CheckParams(theta);
  spec.CheckData(shard);

  std::vector<double> params(theta.values().begin(), theta.values().end());
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> gradient;
  Generator gen = DeriveStream(seed, {});
  const std::size_t n = shard.size();
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    const std::vector<std::size_t> order = RandomPermutation(n, gen);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      const std::span<const std::size_t> batch(order.data() + start,
                                               stop - start);
      const ModelParams current = theta.WithValues(params);
      const double loss = CrossEntropy(spec, current, shard, batch, &gradient);
      if (!std::isfinite(loss)) {
        throw DivergenceError("LocalTrain: loss became non-finite");
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] + gradient[i] +
                      cfg.weight_decay * params[i];
        params[i] -= cfg.learning_rate * velocity[i];
      }
    }
  }
  for (double v : params) {
    if (!std::isfinite(v)) {
      throw DivergenceError("LocalTrain: parameters became non-finite");
    }
  }
  return theta.WithValues(std::move(params));
}

double Evaluate(const ModelSpec& spec, const ModelParams& theta,
                const Dataset& test) {
  if (test.empty()) throw DataError("Evaluate: empty test set");
  spec.CheckParams(theta);
  spec.CheckData(test);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (Predict(spec, theta, test.row(i)) == test.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

Seed256 TrainingSeed(const Seed256& root, int client, int round) {
  return DeriveSeed(root, {kTrainDomain, static_cast<std::uint64_t>(client),
                           static_cast<std::uint64_t>(round)});
}

FedAvgHistory RunFedAvg(const FedAvgSetup& setup) {
  setup.train.Validate();
  if (setup.test == nullptr) throw ConfigError("RunFedAvg: no test set");
  const int num_clients = static_cast<int>(setup.shards.size());
  if (num_clients < 2) throw ConfigError("RunFedAvg: K must be >= 2");
  setup.spec.CheckParams(setup.initial);

  const MaskSeed mask_seed(DeriveSeed(setup.seed, {kMaskRootDomain}));
  const bool twin = setup.plain_twin && setup.mode != AggregationMode::kPlain;

  ServerState server{setup.initial, 0, num_clients, setup.aggregation};
  ServerState plain_server = server;

  FedAvgHistory history;
  for (int round = 0; round < setup.train.rounds; ++round) {
    auto clients = MakeClients(setup, TrainClients(setup, server.global, round));
    RoundResult result = RunRound(clients, server, setup.mode, mask_seed);
    server = std::move(result.server);

    HistoryRow row;
    row.round = round + 1;
    row.accuracy = Evaluate(setup.spec, server.global, *setup.test);
    if (twin) {
      auto plain_clients =
          MakeClients(setup, TrainClients(setup, plain_server.global, round));
      plain_server = RunRound(plain_clients, plain_server,
                              AggregationMode::kPlain, mask_seed)
                         .server;
      row.plain_accuracy = Evaluate(setup.spec, plain_server.global, *setup.test);
      row.cosine_vs_plain = CosineSimilarity(server.global, plain_server.global);
    } else {
      plain_server = server;
      row.plain_accuracy = row.accuracy;
      row.cosine_vs_plain = 1.0;
    }
    const RoundTranscript& t = result.transcript;
    row.overflow_count = t.overflow_count;
    row.encode_overflow_count = t.encode_overflow_count;
    row.scaling_factor = t.scaling_factor;
    row.range_bound = t.range_bound;
    row.prime = t.prime;
    row.precision_degree = t.precision_degree;
    row.counters = t.counters;
    history.rows.push_back(row);
  }
  history.final_model = server.global;
  history.plain_final_model = plain_server.global;
  return history;
}

}  // namespace torus_secagg
