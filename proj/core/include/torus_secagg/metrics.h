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

#ifndef TORUS_SECAGG_METRICS_H_
#define TORUS_SECAGG_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torus_secagg/model_params.h"

namespace torus_secagg {

// dot(a, b) / (||a|| ||b||) over the full flat vectors, in double precision.
// Throws ShapeError on length mismatch and MetricError if either vector is
// all zeros.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);
double CosineSimilarity(const ModelParams& a, const ModelParams& b);

// One-sample Kolmogorov-Smirnov statistic against U[0,1):
//   D = max_i max(i/n - x_(i), x_(i) - (i-1)/n)
// over the sorted sample. Throws DomainError for an empty sample or any sample
// outside [0,1).
double KsUniformStatistic(std::span<const double> samples);

// Asymptotic critical value at alpha = 0.01: 1.63 / sqrt(n). Only meaningful
// for large n (in practice n >= 10^3).
double KsCriticalValue(std::size_t n);

// D < KsCriticalValue(n).
bool PassesKsUniformity(std::span<const double> samples);

// Sample Pearson correlation. Throws ShapeError for unequal lengths or n < 3
// and MetricError when either input has zero variance.
double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y);

// Pearson chi-square statistic of observed bin counts against equal expected
// counts. Throws DomainError for fewer than two bins or no observations.
double ChiSquareUniformStatistic(std::span<const std::uint64_t> counts);

// Mean, population standard deviation and the per-run values behind them.
struct MetricReport {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
  std::vector<double> values;
};

// Throws DomainError when `runs` is empty.
MetricReport Summarize(std::span<const double> runs);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_METRICS_H_
