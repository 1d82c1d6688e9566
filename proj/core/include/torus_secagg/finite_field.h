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

#ifndef TORUS_SECAGG_FINITE_FIELD_H_
#define TORUS_SECAGG_FINITE_FIELD_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torus_secagg/masking.h"
#include "torus_secagg/model_params.h"

namespace torus_secagg {

// Trial division; exact for every n below 2^40.
bool IsPrime(std::uint64_t n);

// Fixed-point scale: 10^d (decimal digits of precision) or 2^d.
enum class FixedPointBase { kDecimal, kBinary };

// Modulus p and fixed-point precision degree d. Residues use the balanced
// signed representation: [0, (p-1)/2] are non-negative, ((p-1)/2, p) are
// negative.
//
// Encoding, masking and summation only use the additive group Z_p, so any odd
// modulus works. Composite moduli are accepted because the customary small
// preset 2^15 - 1 = 7 * 31 * 151 is one; is_prime() reports which case holds.
class FieldParams {
 public:
  // Throws ConfigError unless p is odd, 3 <= p < 2^40, and
  // 0 <= d <= 18 (decimal) / 62 (binary).
  FieldParams(std::uint64_t prime, int precision,
              FixedPointBase base = FixedPointBase::kDecimal);

  // p = 2^31 - 1, d = 7.
  static FieldParams Mersenne31();
  // p = 2^15 - 1 (composite), d = 4.
  static FieldParams Mersenne15();

  std::uint64_t prime() const { return prime_; }
  int precision() const { return precision_; }
  FixedPointBase base() const { return base_; }
  bool is_prime() const { return IsPrime(prime_); }
  double scale() const { return scale_; }
  // (p-1)/2, the largest magnitude encodable without wrap-around.
  std::uint64_t half() const { return (prime_ - 1) / 2; }
  // half() / scale(): largest representable |x|.
  double max_representable() const;

 private:
  std::uint64_t prime_;
  int precision_;
  FixedPointBase base_;
  double scale_;
};

struct EncodedValue {
  std::uint64_t residue;
  // |round(x * scale)| exceeded (p-1)/2; the residue wraps and decodes to a
  // different value.
  bool overflow;
};

// q = round(x * scale) (ties away from zero); returns q mod p with negatives
// mapped to p - (|q| mod p). Overflow is flagged, not thrown. Throws
// DomainError for non-finite x.
EncodedValue FpEncode(double x, const FieldParams& params);

// Balanced lift of e divided by the scale. Throws DomainError unless e < p.
double FpDecode(std::uint64_t residue, const FieldParams& params);

// Vector of residues in [0, p).
class FieldVector {
 public:
  // Throws DomainError if an entry is >= p.
  FieldVector(std::vector<std::uint64_t> residues, std::uint64_t prime);
  static FieldVector Zeros(std::size_t m, std::uint64_t prime);

  std::size_t size() const { return residues_.size(); }
  std::uint64_t prime() const { return prime_; }
  std::uint64_t operator[](std::size_t i) const { return residues_[i]; }
  std::span<const std::uint64_t> residues() const { return residues_; }

  friend bool operator==(const FieldVector&, const FieldVector&) = default;

 private:
  std::vector<std::uint64_t> residues_;
  std::uint64_t prime_;
};

// Entrywise (a +/- b) mod p. Throws ShapeError on length or modulus mismatch.
FieldVector FieldAdd(const FieldVector& a, const FieldVector& b);
FieldVector FieldSub(const FieldVector& a, const FieldVector& b);

// Encodes every coordinate; `overflows`, when non-null, receives the number
// of coordinates whose encoding wrapped.
FieldVector EncodeVector(const ModelParams& theta, const FieldParams& params,
                         std::size_t* overflows = nullptr,
                         OpTally* tally = nullptr);

// Sum mod p in ascending index order. Throws ConfigError if empty.
FieldVector FieldSum(std::span<const FieldVector> vectors,
                     OpTally* tally = nullptr);
ModelParams DecodeVector(const FieldVector& v, const FieldParams& params);

// Pairwise field masks w_{k,j}, entries uniform on [0, p). Same pairing and
// sign convention as the torus masks.
class FieldPairwiseMasks {
 public:
  static FieldPairwiseMasks Generate(int num_clients, std::size_t dimension,
                                     std::uint64_t prime,
                                     const MaskSeed& seed);

  int num_clients() const { return num_clients_; }
  std::size_t dimension() const { return dimension_; }
  std::uint64_t prime() const { return prime_; }
  // w_{k,j}; requires 1 <= k < j <= K, else DomainError.
  const FieldVector& at(int k, int j) const;

 private:
  FieldPairwiseMasks(int num_clients, std::size_t dimension,
                     std::uint64_t prime, std::vector<FieldVector> masks)
      : num_clients_(num_clients),
        dimension_(dimension),
        prime_(prime),
        masks_(std::move(masks)) {}

  int num_clients_;
  std::size_t dimension_;
  std::uint64_t prime_;
  std::vector<FieldVector> masks_;
};

// Expands a pair seed into m residues uniform on [0, p).
FieldVector ExpandFieldPairMask(const Seed256& pair_seed, std::size_t dimension,
                                std::uint64_t prime);

// sum_{j>k} w_{k,j} - sum_{j<k} w_{j,k} mod p.
FieldVector FieldNetMask(int k, const FieldPairwiseMasks& masks);

// Field counterpart of ApplyMasks: adds `added`, subtracts `subtracted`, one
// modular addition per entry and mask, counted in `tally`.
FieldVector FieldApplyMasks(FieldVector encoded,
                            std::span<const FieldVector* const> added,
                            std::span<const FieldVector* const> subtracted,
                            OpTally* tally = nullptr);

// Encode(theta_k) + sum_{j>k} w_{k,j} - sum_{j<k} w_{j,k} mod p. Encoding
// counts one multiplication per entry in `tally`.
FieldVector FieldEncryptUpdate(const ModelParams& theta, int k,
                               const FieldPairwiseMasks& masks,
                               const FieldParams& params,
                               std::size_t* encode_overflows = nullptr,
                               OpTally* tally = nullptr);

struct FieldAggregate {
  // Decoded sum of the client vectors (not divided by K).
  ModelParams sum;
  // Coordinates whose true fixed-point sum lies outside the balanced range,
  // i.e. where the decoded sum is wrong. Measured against the plaintext, so
  // this is simulator-side bookkeeping the server could not compute.
  std::size_t overflow_count = 0;
  // Individual coordinate encodings that wrapped.
  std::size_t encode_overflow_count = 0;
};

// Plaintext oracle: coordinates where |sum_k round(theta_k[i] * scale)|
// exceeds (p-1)/2.
std::size_t CountSumOverflows(std::span<const ModelParams> thetas,
                              const FieldParams& params);

// Baseline secure aggregation over GF(p): encode, mask, add mod p in
// ascending client order, decode. Throws ConfigError for fewer than two
// vectors and ShapeError for unequal lengths.
FieldAggregate FfMaskedAggregate(std::span<const ModelParams> thetas,
                                 const FieldParams& params,
                                 const MaskSeed& seed);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_FINITE_FIELD_H_
