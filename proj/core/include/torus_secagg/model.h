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

#ifndef TORUS_SECAGG_MODEL_H_
#define TORUS_SECAGG_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torus_secagg/data.h"
#include "torus_secagg/model_params.h"
#include "torus_secagg/rng.h"

namespace torus_secagg {

enum class ModelKind {
  // Single linear layer + softmax (the MNIST "single-layer network"; also the
  // linear model used on synthetic blobs).
  kSoftmaxRegression,
  // One ReLU hidden layer + softmax.
  kMlp,
};

struct ModelSpec {
  ModelKind kind = ModelKind::kSoftmaxRegression;
  std::size_t num_features = 0;
  int num_classes = 0;
  std::size_t hidden = 0;  // kMlp only

  // Softmax regression: {{C, f}, {C}}.
  // MLP: {{h, f}, {h}, {C, h}, {C}}.
  std::vector<TensorShape> Layout() const;
  std::size_t ParameterCount() const;

  // Throws ShapeError unless `params` has this spec's layout.
  void CheckParams(const ModelParams& params) const;
  // Throws ShapeError unless the dataset matches f and C.
  void CheckData(const Dataset& data) const;
};

// Zeros for softmax regression; for the MLP, weights uniform in
// +-sqrt(6 / (fan_in + fan_out)) and zero biases.
ModelParams InitialParams(const ModelSpec& spec, std::uint64_t seed);

// Class scores for one input.
void Logits(const ModelSpec& spec, const ModelParams& params,
            std::span<const double> x, std::span<double> out);

// Index of the largest logit; ties go to the lowest class index.
int Predict(const ModelSpec& spec, const ModelParams& params,
            std::span<const double> x);

// Mean softmax cross-entropy over `batch` rows of `data`. When `gradient` is
// non-null it is resized to ParameterCount() and receives the gradient of the
// mean loss.
double CrossEntropy(const ModelSpec& spec, const ModelParams& params,
                    const Dataset& data, std::span<const std::size_t> batch,
                    std::vector<double>* gradient = nullptr);

// Mean cross-entropy over all of `data`.
double CrossEntropy(const ModelSpec& spec, const ModelParams& params,
                    const Dataset& data);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_MODEL_H_
