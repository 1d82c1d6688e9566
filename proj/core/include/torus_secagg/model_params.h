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

#ifndef TORUS_SECAGG_MODEL_PARAMS_H_
#define TORUS_SECAGG_MODEL_PARAMS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace torus_secagg {

// Dimensions of one parameter tensor, e.g. {10, 784} for a weight matrix or
// {10} for a bias.
using TensorShape = std::vector<std::size_t>;

// Flat real parameter vector theta in R^m together with the tensor layout it
// was flattened from. The layout is metadata only; every aggregation
// primitive treats the model as a plain length-m vector.
class ModelParams {
 public:
  ModelParams() = default;

  // Single tensor of shape {m}.
  explicit ModelParams(std::vector<double> flat);

  // Throws ShapeError unless the tensor sizes add up to flat.size(), and
  // DomainError if any entry is non-finite.
  ModelParams(std::vector<double> flat, std::vector<TensorShape> layout);

  static ModelParams Zeros(std::vector<TensorShape> layout);

  std::size_t size() const { return flat_.size(); }
  bool empty() const { return flat_.empty(); }

  std::span<const double> values() const { return flat_; }
  std::span<double> mutable_values() { return flat_; }
  const std::vector<double>& flat() const { return flat_; }

  double operator[](std::size_t i) const { return flat_[i]; }
  double& operator[](std::size_t i) { return flat_[i]; }

  const std::vector<TensorShape>& layout() const { return layout_; }

  // Same layout as `other` (and therefore the same m).
  bool SameLayout(const ModelParams& other) const {
    return layout_ == other.layout_;
  }

  // Max-norm ||theta||_inf.
  double InfinityNorm() const;
  bool AllFinite() const;

  // Copy with a different flat vector but this layout.
  ModelParams WithValues(std::vector<double> flat) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  std::vector<double> flat_;
  std::vector<TensorShape> layout_;
};

std::size_t LayoutSize(const std::vector<TensorShape>& layout);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_MODEL_PARAMS_H_
