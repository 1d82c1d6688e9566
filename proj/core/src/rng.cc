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

#include "torus_secagg/rng.h"

#include <bit>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace torus_secagg {
namespace {

std::vector<std::uint32_t> SeedMaterial(
    const Seed256& root, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> material;
  material.reserve(2 * (root.words.size() + path.size()) + 1);
  for (std::uint64_t w : root.words) {
    material.push_back(static_cast<std::uint32_t>(w));
    material.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  // Path length first so {a} and {a, 0} differ.
  material.push_back(static_cast<std::uint32_t>(path.size()));
  for (std::uint64_t p : path) {
    material.push_back(static_cast<std::uint32_t>(p));
    material.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  return material;
}

}  // namespace

Seed256 Seed256::FromInteger(std::uint64_t value) {
  std::seed_seq seq{static_cast<std::uint32_t>(value),
                    static_cast<std::uint32_t>(value >> 32)};
  std::array<std::uint32_t, 8> out{};
  seq.generate(out.begin(), out.end());
  Seed256 seed;
  for (std::size_t i = 0; i < 4; ++i) {
    seed.words[i] = (static_cast<std::uint64_t>(out[2 * i + 1]) << 32) |
                    out[2 * i];
  }
  return seed;
}

std::string Seed256::ToHex() const {
  std::string hex;
  char buf[17];
  for (auto it = words.rbegin(); it != words.rend(); ++it) {
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(*it));
    hex += buf;
  }
  return hex;
}

Generator DeriveStream(const Seed256& root,
                       std::initializer_list<std::uint64_t> path) {
  const std::vector<std::uint32_t> material = SeedMaterial(root, path);
  std::seed_seq seq(material.begin(), material.end());
  return Generator(seq);
}

Seed256 DeriveSeed(const Seed256& root,
                   std::initializer_list<std::uint64_t> path) {
  Generator gen = DeriveStream(root, path);
  Seed256 child;
  for (auto& w : child.words) w = gen();
  return child;
}

std::uint64_t UniformBelow(Generator& gen, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("UniformBelow: bound must be > 0");
  if (bound == 1) return 0;
  const int bits = std::bit_width(bound - 1);
  const std::uint64_t mask =
      bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
  while (true) {
    // High bits of mt19937_64 output are as good as the low ones; take the
    // top `bits` so the mapping matches UniformUnit's use of the top word.
    const std::uint64_t candidate = (gen() >> (64 - bits)) & mask;
    if (candidate < bound) return candidate;
  }
}

void Shuffle(std::span<std::size_t> values, Generator& gen) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(UniformBelow(gen, i));
    std::swap(values[i - 1], values[j]);
  }
}

std::vector<std::size_t> RandomPermutation(std::size_t n, Generator& gen) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Shuffle(perm, gen);
  return perm;
}

}  // namespace torus_secagg
