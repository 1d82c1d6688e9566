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

#ifndef TORUS_SECAGG_RNG_H_
#define TORUS_SECAGG_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace torus_secagg {

// All randomness flows from std::mt19937_64 streams. Both the engine and
// std::seed_seq are fully specified by the standard, so a stream derived from
// the same (root, path) produces the same bits on every conforming platform.
using Generator = std::mt19937_64;

// 256-bit root seed.
struct Seed256 {
  std::array<std::uint64_t, 4> words{};

  // Expands a 64-bit integer into a 256-bit root.
  static Seed256 FromInteger(std::uint64_t value);

  // Hex rendering, most significant word first.
  std::string ToHex() const;

  friend bool operator==(const Seed256&, const Seed256&) = default;
};

// Independent stream keyed by `root` and a derivation path, e.g.
// {kMaskDomain, round, k, j}. Distinct paths give unrelated streams.
Generator DeriveStream(const Seed256& root,
                       std::initializer_list<std::uint64_t> path);

// Derives a child root seed, used to give each run or round its own root.
Seed256 DeriveSeed(const Seed256& root,
                   std::initializer_list<std::uint64_t> path);

// Uniform double in [0,1): the top 53 bits of one 64-bit draw over 2^53.
inline double UniformUnit(Generator& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection on the smallest covering
// power of two. bound must be positive.
std::uint64_t UniformBelow(Generator& gen, std::uint64_t bound);

// Fisher-Yates shuffle driven by UniformBelow, so the permutation is
// reproducible across standard library implementations (std::shuffle is not).
void Shuffle(std::span<std::size_t> values, Generator& gen);

// Random permutation of 0..n-1.
std::vector<std::size_t> RandomPermutation(std::size_t n, Generator& gen);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_RNG_H_
