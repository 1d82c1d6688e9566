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

#include "torus_secagg/finite_field.h"

#include <cmath>
#include <string>

#include "torus_secagg/errors.h"
#include "torus_secagg/rng.h"

namespace torus_secagg {
namespace {

constexpr std::uint64_t kMaxPrime = std::uint64_t{1} << 40;
constexpr std::uint64_t kFieldMaskDomain = 0x66662d6d61736b00ULL;

std::uint64_t AddMod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

std::uint64_t SubMod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

std::size_t PairIndex(int num_clients, int k, int j) {
  if (k < 1 || j <= k || j > num_clients) {
    throw DomainError("field mask pair (" + std::to_string(k) + ", " +
                      std::to_string(j) + ") out of range");
  }
  const auto kk = static_cast<std::size_t>(k);
  const auto n = static_cast<std::size_t>(num_clients);
  return (kk - 1) * (2 * n - kk) / 2 + static_cast<std::size_t>(j - k - 1);
}

}  // namespace

bool IsPrime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

FieldParams::FieldParams(std::uint64_t prime, int precision,
                         FixedPointBase base)
    : prime_(prime), precision_(precision), base_(base) {
  if (prime < 3 || prime >= kMaxPrime || prime % 2 == 0) {
    throw ConfigError("FieldParams: p must be an odd modulus below 2^40");
  }
  const int max_precision = base == FixedPointBase::kDecimal ? 18 : 62;
  if (precision < 0 || precision > max_precision) {
    throw ConfigError("FieldParams: precision degree out of range");
  }
  scale_ = base == FixedPointBase::kDecimal ? std::pow(10.0, precision)
                                            : std::ldexp(1.0, precision);
}

FieldParams FieldParams::Mersenne31() {
  return FieldParams((std::uint64_t{1} << 31) - 1, 7);
}

FieldParams FieldParams::Mersenne15() {
  return FieldParams((std::uint64_t{1} << 15) - 1, 4);
}

double FieldParams::max_representable() const {
  return static_cast<double>(half()) / scale_;
}

EncodedValue FpEncode(double x, const FieldParams& params) {
  if (!std::isfinite(x)) throw DomainError("FpEncode: non-finite input");
  const double q = std::round(x * params.scale());  // ties away from zero
  const double magnitude = std::fabs(q);
  const bool overflow = magnitude > static_cast<double>(params.half());
  // fmod is exact, so this is |q| mod p even when |q| exceeds 2^53.
  const auto reduced = static_cast<std::uint64_t>(
      std::fmod(magnitude, static_cast<double>(params.prime())));
  const std::uint64_t residue =
      (q < 0 && reduced != 0) ? params.prime() - reduced : reduced;
  return {residue, overflow};
}

double FpDecode(std::uint64_t residue, const FieldParams& params) {
  if (residue >= params.prime()) {
    throw DomainError("FpDecode: residue not below p");
  }
  const double signed_value =
      residue <= params.half()
          ? static_cast<double>(residue)
          : -static_cast<double>(params.prime() - residue);
  return signed_value / params.scale();
}

FieldVector::FieldVector(std::vector<std::uint64_t> residues,
                         std::uint64_t prime)
    : residues_(std::move(residues)), prime_(prime) {
  for (std::uint64_t r : residues_) {
    if (r >= prime_) throw DomainError("FieldVector: residue not below p");
  }
}

FieldVector FieldVector::Zeros(std::size_t m, std::uint64_t prime) {
  return FieldVector(std::vector<std::uint64_t>(m, 0), prime);
}

FieldVector FieldAdd(const FieldVector& a, const FieldVector& b) {
  if (a.size() != b.size() || a.prime() != b.prime()) {
    throw ShapeError("FieldAdd: length or modulus mismatch");
  }
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = AddMod(a[i], b[i], a.prime());
  }
  return FieldVector(std::move(out), a.prime());
}

FieldVector FieldSub(const FieldVector& a, const FieldVector& b) {
  if (a.size() != b.size() || a.prime() != b.prime()) {
    throw ShapeError("FieldSub: length or modulus mismatch");
  }
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = SubMod(a[i], b[i], a.prime());
  }
  return FieldVector(std::move(out), a.prime());
}

FieldVector EncodeVector(const ModelParams& theta, const FieldParams& params,
                         std::size_t* overflows, OpTally* tally) {
  std::vector<std::uint64_t> out(theta.size());
  std::size_t wrapped = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const EncodedValue e = FpEncode(theta[i], params);
    out[i] = e.residue;
    wrapped += e.overflow ? 1 : 0;
  }
  if (overflows != nullptr) *overflows = wrapped;
  if (tally != nullptr) tally->multiplications += out.size();
  return FieldVector(std::move(out), params.prime());
}

FieldVector FieldSum(std::span<const FieldVector> vectors, OpTally* tally) {
  if (vectors.empty()) throw ConfigError("FieldSum: no vectors");
  FieldVector acc = vectors.front();
  for (std::size_t k = 1; k < vectors.size(); ++k) {
    acc = FieldAdd(acc, vectors[k]);
    if (tally != nullptr) tally->additions += acc.size();
  }
  return acc;
}

ModelParams DecodeVector(const FieldVector& v, const FieldParams& params) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = FpDecode(v[i], params);
  }
  return ModelParams(std::move(out));
}

FieldPairwiseMasks FieldPairwiseMasks::Generate(int num_clients,
                                                std::size_t dimension,
                                                std::uint64_t prime,
                                                const MaskSeed& seed) {
  if (num_clients < 2) throw ConfigError("FieldPairwiseMasks: K must be >= 2");
  if (dimension < 1) throw ConfigError("FieldPairwiseMasks: m must be >= 1");
  std::vector<FieldVector> masks;
  masks.reserve(static_cast<std::size_t>(num_clients) * (num_clients - 1) / 2);
  for (int k = 1; k <= num_clients; ++k) {
    for (int j = k + 1; j <= num_clients; ++j) {
      masks.push_back(ExpandFieldPairMask(seed.PairSeed(k, j), dimension, prime));
    }
  }
  return FieldPairwiseMasks(num_clients, dimension, prime, std::move(masks));
}

FieldVector ExpandFieldPairMask(const Seed256& pair_seed, std::size_t dimension,
                                std::uint64_t prime) {
  Generator stream = DeriveStream(pair_seed, {kFieldMaskDomain});
  std::vector<std::uint64_t> residues(dimension);
  for (auto& r : residues) r = UniformBelow(stream, prime);
  return FieldVector(std::move(residues), prime);
}

const FieldVector& FieldPairwiseMasks::at(int k, int j) const {
  return masks_[PairIndex(num_clients_, k, j)];
}

FieldVector FieldNetMask(int k, const FieldPairwiseMasks& masks) {
  if (k < 1 || k > masks.num_clients()) {
    throw DomainError("FieldNetMask: client index out of range");
  }
  FieldVector net = FieldVector::Zeros(masks.dimension(), masks.prime());
  for (int j = k + 1; j <= masks.num_clients(); ++j) {
    net = FieldAdd(net, masks.at(k, j));
  }
  for (int j = 1; j < k; ++j) net = FieldSub(net, masks.at(j, k));
  return net;
}

FieldVector FieldApplyMasks(FieldVector encoded,
                            std::span<const FieldVector* const> added,
                            std::span<const FieldVector* const> subtracted,
                            OpTally* tally) {
  for (const FieldVector* w : added) encoded = FieldAdd(encoded, *w);
  for (const FieldVector* w : subtracted) encoded = FieldSub(encoded, *w);
  if (tally != nullptr) {
    tally->additions += (added.size() + subtracted.size()) * encoded.size();
  }
  return encoded;
}

FieldVector FieldEncryptUpdate(const ModelParams& theta, int k,
                               const FieldPairwiseMasks& masks,
                               const FieldParams& params,
                               std::size_t* encode_overflows, OpTally* tally) {
  if (theta.size() != masks.dimension()) {
    throw ShapeError("FieldEncryptUpdate: model length differs from masks");
  }
  if (params.prime() != masks.prime()) {
    throw ShapeError("FieldEncryptUpdate: modulus differs from masks");
  }
  if (k < 1 || k > masks.num_clients()) {
    throw DomainError("FieldEncryptUpdate: client index out of range");
  }
  std::vector<const FieldVector*> added;
  std::vector<const FieldVector*> subtracted;
  for (int j = k + 1; j <= masks.num_clients(); ++j) {
    added.push_back(&masks.at(k, j));
  }
  for (int j = 1; j < k; ++j) subtracted.push_back(&masks.at(j, k));
  return FieldApplyMasks(EncodeVector(theta, params, encode_overflows, tally),
                         added, subtracted, tally);
}

std::size_t CountSumOverflows(std::span<const ModelParams> thetas,
                              const FieldParams& params) {
  std::size_t count = 0;
  const std::size_t m = thetas.front().size();
  const double half = static_cast<double>(params.half());
  for (std::size_t i = 0; i < m; ++i) {
    double exact_sum = 0.0;  // integers below 2^53 in every supported setup
    for (const auto& theta : thetas) {
      exact_sum += std::round(theta[i] * params.scale());
    }
    if (std::fabs(exact_sum) > half) ++count;
  }
  return count;
}

FieldAggregate FfMaskedAggregate(std::span<const ModelParams> thetas,
                                 const FieldParams& params,
                                 const MaskSeed& seed) {
  if (thetas.size() < 2) {
    throw ConfigError("FfMaskedAggregate: need at least two clients");
  }
  const std::size_t m = thetas.front().size();
  for (const auto& theta : thetas) {
    if (theta.size() != m) throw ShapeError("FfMaskedAggregate: ragged input");
  }
  const int num_clients = static_cast<int>(thetas.size());
  const FieldPairwiseMasks masks =
      FieldPairwiseMasks::Generate(num_clients, m, params.prime(), seed);

  FieldAggregate result;
  std::vector<FieldVector> submissions;
  submissions.reserve(thetas.size());
  for (int k = 1; k <= num_clients; ++k) {
    std::size_t wrapped = 0;
    submissions.push_back(
        FieldEncryptUpdate(thetas[k - 1], k, masks, params, &wrapped));
    result.encode_overflow_count += wrapped;
  }
  result.sum = DecodeVector(FieldSum(submissions), params);
  result.overflow_count = CountSumOverflows(thetas, params);
  return result;
}

}  // namespace torus_secagg
