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

#include "torus_secagg/masking.h"

#include <string>

#include "torus_secagg/errors.h"

namespace torus_secagg {
namespace {

constexpr std::uint64_t kMaskDomain = 0x6d61736b2d70616dULL;
constexpr std::uint64_t kRoundDomain = 0x726f756e642d6d6bULL;

std::size_t PairCount(int num_clients) {
  const auto k = static_cast<std::size_t>(num_clients);
  return k * (k - 1) / 2;
}

}  // namespace

Seed256 MaskSeed::PairSeed(int k, int j) const {
  return DeriveSeed(root_, {kMaskDomain, static_cast<std::uint64_t>(k),
                            static_cast<std::uint64_t>(j)});
}

MaskSeed MaskSeed::ForRound(std::uint64_t round) const {
  return MaskSeed(DeriveSeed(root_, {kRoundDomain, round}));
}

std::size_t PairwiseMasks::PairIndex(int k, int j) const {
  if (k < 1 || j <= k || j > num_clients_) {
    throw DomainError("PairwiseMasks: pair (" + std::to_string(k) + ", " +
                      std::to_string(j) + ") out of range");
  }
  const auto kk = static_cast<std::size_t>(k);
  const auto n = static_cast<std::size_t>(num_clients_);
  // Pairs are stored row by row: (1,2), (1,3), ..., (1,K), (2,3), ...
  return (kk - 1) * (2 * n - kk) / 2 + static_cast<std::size_t>(j - k - 1);
}

const TorusVector& PairwiseMasks::at(int k, int j) const {
  return masks_[PairIndex(k, j)];
}

PairwiseMasks PairwiseMasks::FromMap(
    int num_clients, std::size_t dimension,
    std::map<std::pair<int, int>, TorusVector> masks) {
  if (num_clients < 2) throw ConfigError("PairwiseMasks: K must be >= 2");
  if (masks.size() != PairCount(num_clients)) {
    throw ConfigError("PairwiseMasks: expected K(K-1)/2 masks");
  }
  std::vector<TorusVector> ordered;
  ordered.reserve(masks.size());
  for (int k = 1; k <= num_clients; ++k) {
    for (int j = k + 1; j <= num_clients; ++j) {
      auto it = masks.find({k, j});
      if (it == masks.end()) {
        throw ConfigError("PairwiseMasks: missing pair (" + std::to_string(k) +
                          ", " + std::to_string(j) + ")");
      }
      if (it->second.size() != dimension) {
        throw ShapeError("PairwiseMasks: mask length differs from m");
      }
      ordered.push_back(std::move(it->second));
    }
  }
  return PairwiseMasks(num_clients, dimension, std::move(ordered));
}

TorusVector ExpandPairMask(const Seed256& pair_seed, std::size_t dimension,
                           Precision precision) {
  Generator stream = DeriveStream(pair_seed, {});
  std::vector<double> values(dimension);
  for (double& v : values) v = UniformUnit(stream);
  return TorusVector::FromReals(values, precision);
}

PairwiseMasks GeneratePairwiseMasks(int num_clients, std::size_t dimension,
                                    const MaskSeed& seed,
                                    Precision precision) {
  if (num_clients < 2) {
    throw ConfigError("GeneratePairwiseMasks: K must be >= 2");
  }
  if (dimension < 1) throw ConfigError("GeneratePairwiseMasks: m must be >= 1");
  std::vector<TorusVector> masks;
  masks.reserve(PairCount(num_clients));
  for (int k = 1; k <= num_clients; ++k) {
    for (int j = k + 1; j <= num_clients; ++j) {
      masks.push_back(ExpandPairMask(seed.PairSeed(k, j), dimension, precision));
    }
  }
  return PairwiseMasks(num_clients, dimension, std::move(masks));
}

TorusVector NetMask(int k, const PairwiseMasks& masks, Precision precision) {
  const int num_clients = masks.num_clients();
  if (k < 1 || k > num_clients) {
    throw DomainError("NetMask: client index " + std::to_string(k) +
                      " out of range");
  }
  TorusVector net = TorusVector::Zeros(masks.dimension());
  for (int j = k + 1; j <= num_clients; ++j) {
    net = TorusAdd(net, masks.at(k, j), precision);
  }
  for (int j = 1; j < k; ++j) {
    net = TorusSub(net, masks.at(j, k), precision);
  }
  return net;
}

TorusVector ApplyMasks(TorusVector scaled,
                       std::span<const TorusVector* const> added,
                       std::span<const TorusVector* const> subtracted,
                       Precision precision, OpTally* tally) {
  for (const TorusVector* z : added) {
    scaled = TorusAdd(scaled, *z, precision);
  }
  for (const TorusVector* z : subtracted) {
    scaled = TorusSub(scaled, *z, precision);
  }
  if (tally != nullptr) {
    tally->additions += (added.size() + subtracted.size()) * scaled.size();
  }
  return scaled;
}

TorusVector EncryptUpdate(const ModelParams& theta, int k,
                          const PairwiseMasks& masks, double scaling_factor,
                          Precision precision, OpTally* tally) {
  if (theta.size() != masks.dimension()) {
    throw ShapeError("EncryptUpdate: model length " +
                     std::to_string(theta.size()) + " != mask length " +
                     std::to_string(masks.dimension()));
  }
  const int num_clients = masks.num_clients();
  if (k < 1 || k > num_clients) {
    throw DomainError("EncryptUpdate: client index out of range");
  }
  std::vector<const TorusVector*> added;
  std::vector<const TorusVector*> subtracted;
  for (int j = k + 1; j <= num_clients; ++j) added.push_back(&masks.at(k, j));
  for (int j = 1; j < k; ++j) subtracted.push_back(&masks.at(j, k));
  return ApplyMasks(ScaleToTorus(theta, scaling_factor, precision, tally),
                    added, subtracted, precision, tally);
}

}  // namespace torus_secagg
