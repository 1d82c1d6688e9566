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

#ifndef TORUS_SECAGG_EXPERIMENT_H_
#define TORUS_SECAGG_EXPERIMENT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "torus_secagg/config.h"
#include "torus_secagg/data.h"
#include "torus_secagg/model.h"
#include "torus_secagg/training.h"

namespace torus_secagg {

// One (mode, K, L) combination, with a history per run.
struct ExperimentCell {
  AggregationMode mode = AggregationMode::kTorus;
  int num_clients = 0;
  std::size_t dimension = 0;
  // L as configured: "strict", "linear", or an expression such as "10K".
  // Empty outside torus mode.
  std::string scaling_setting;
  std::vector<FedAvgHistory> runs;
};

struct ExperimentResult {
  ExperimentConfig config;  // as run, with the effective seed
  std::vector<ExperimentCell> cells;
};

struct ExperimentData {
  Dataset train;
  Dataset test;
};

// Loads MNIST (truncated to train_samples/test_samples) or generates the
// synthetic blobs. Throws DataError when MNIST files are missing.
ExperimentData LoadExperimentData(const ExperimentConfig& cfg);

ModelSpec MakeModelSpec(const ExperimentConfig& cfg, const Dataset& train);

// Runs every cell for cfg.runs runs. Run r partitions the training set,
// initialises the model and seeds client training from (seed, r), so every
// cell of the same K sees the same shards and training randomness. Throws
// ConfigError listing every violation when the config is invalid.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

// Same, on already loaded data.
ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const ExperimentData& data);

// rounds.csv: one row per (cell, run, round).
//   run,round,mode,K,m,L_or_p,d,cosine_vs_plain,accuracy,overflow_count,
//   client_ops,server_ops,comm_symbols,plain_accuracy,L_setting,R,
//   server_comm_symbols,client_storage_symbols,server_storage_symbols
// summary.csv: one row per cell, last-round values across runs.
//   mode,K,m,L_setting,p,d,rounds,runs,cosine_mean,cosine_std,cosine_min,
//   accuracy_mean,accuracy_std,plain_accuracy_mean,plain_accuracy_std,
//   overflow_mean
// cosine_min is the minimum over every round of every run.
// plot.csv: one row per (cell, round), means across runs.
//   mode,K,L_setting,round,accuracy_mean,accuracy_std,plain_accuracy_mean,
//   cosine_mean
// config.txt: the effective configuration.
void WriteRoundsCsv(const ExperimentResult& result, std::ostream& out);
void WriteSummaryCsv(const ExperimentResult& result, std::ostream& out);
void WritePlotCsv(const ExperimentResult& result, std::ostream& out);
void WriteReports(const ExperimentResult& result,
                  const std::filesystem::path& dir);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_EXPERIMENT_H_
