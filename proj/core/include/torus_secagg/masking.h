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

#ifndef TORUS_SECAGG_MASKING_H_
#define TORUS_SECAGG_MASKING_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "torus_secagg/model_params.h"
#include "torus_secagg/rng.h"
#include "torus_secagg/torus.h"

namespace torus_secagg {

// Root seed from which every pairwise mask stream is derived. The same
// (root, k, j) always yields the same mask vector.
class MaskSeed {
 public:
  explicit MaskSeed(Seed256 root) : root_(root) {}
  static MaskSeed FromInteger(std::uint64_t value) {
    return MaskSeed(Seed256::FromInteger(value));
  }

  const Seed256& root() const { return root_; }

  // Seed shared by the pair (k, j), 1 <= k < j. Expanding it yields z_{k,j};
  // in seed-exchange mode this is what client k sends to client j.
  Seed256 PairSeed(int k, int j) const;

  // Fresh root for a given round; masks are never reused across rounds.
  MaskSeed ForRound(std::uint64_t round) const;

 private:
  Seed256 root_;
};

// The K(K-1)/2 one-time pads z_{k,j} (1 <= k < j <= K), each in T^m.
// Client k generates z_{k,j} for every j > k and receives z_{j,k} from every
// j < k.
class PairwiseMasks {
 public:
  // Builds from explicit vectors; used to pin hand-computed cases. Throws
  // ConfigError unless exactly one entry per pair k < j is present, and
  // ShapeError unless every vector has length m.
  static PairwiseMasks FromMap(int num_clients, std::size_t dimension,
                               std::map<std::pair<int, int>, TorusVector> masks);

  int num_clients() const { return num_clients_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t pair_count() const { return masks_.size(); }

  // z_{k,j}; requires 1 <= k < j <= K, else DomainError.
  const TorusVector& at(int k, int j) const;

 private:
  friend PairwiseMasks GeneratePairwiseMasks(int, std::size_t,
                                             const MaskSeed&, Precision);
  PairwiseMasks(int num_clients, std::size_t dimension,
                std::vector<TorusVector> masks)
      : num_clients_(num_clients),
        dimension_(dimension),
        masks_(std::move(masks)) {}

  std::size_t PairIndex(int k, int j) const;

  int num_clients_ = 0;
  std::size_t dimension_ = 0;
  std::vector<TorusVector> masks_;
};

// Number of symbols a Seed256 occupies on the wire (4 x 64-bit words).
inline constexpr std::uint64_t kSeedSymbols = 4;

// Expands a pair seed into m entries i.i.d. uniform on [0,1).
TorusVector ExpandPairMask(const Seed256& pair_seed, std::size_t dimension,
                           Precision precision = Precision::kFloat64);

// Samples every z_{k,j} entry i.i.d. uniform on [0,1) from its pair stream.
// Throws ConfigError for K < 2 or m < 1.
PairwiseMasks GeneratePairwiseMasks(int num_clients, std::size_t dimension,
                                    const MaskSeed& seed,
                                    Precision precision = Precision::kFloat64);

// Net pad of client k: sum_{j>k} z_{k,j} - sum_{j<k} z_{j,k} mod 1,
// accumulated in ascending j. Throws DomainError unless 1 <= k <= K.
TorusVector NetMask(int k, const PairwiseMasks& masks,
                    Precision precision = Precision::kFloat64);

// Adds every mask in `added` and subtracts every mask in `subtracted`, in
// order, to an already scaled update. Each step is one wrapped addition per
// entry and is counted in `tally`.
TorusVector ApplyMasks(TorusVector scaled,
                       std::span<const TorusVector* const> added,
                       std::span<const TorusVector* const> subtracted,
                       Precision precision = Precision::kFloat64,
                       OpTally* tally = nullptr);

// p_k = theta_k / L + sum_{j>k} z_{k,j} - sum_{j<k} z_{j,k} mod 1, which
// equals theta_k / L + NetMask(k) on the torus. Throws ShapeError if the model
// length differs from the mask dimension.
TorusVector EncryptUpdate(const ModelParams& theta, int k,
                          const PairwiseMasks& masks, double scaling_factor,
                          Precision precision = Precision::kFloat64,
                          OpTally* tally = nullptr);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_MASKING_H_
