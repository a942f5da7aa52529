// Copyright 2026 The VSG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VSG_DISTRIBUTIONS_H_
#define VSG_DISTRIBUTIONS_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace vsg {

// Probabilities below this floor are clamped before logs are taken.
inline constexpr double kProbFloor = 1e-12;

// Natural-log entropy with the 0 log 0 = 0 convention.
double entropy(std::span<const double> dist);

// KL(p || q), natural log. Throws ParameterError if q has a zero where p
// does not (support violation).
double kl(std::span<const double> p, std::span<const double> q);

// Total variation distance, 0.5 * sum |p - q|.
double tv(std::span<const double> p, std::span<const double> q);

bool is_distribution(std::span<const double> p, double tol = 1e-10);

// In-place softmax of a row of scores, max-subtracted for stability.
void softmax_inplace(std::span<double> scores);

// out[a] = base[a] * exp(scores[a]) / Z, max-subtracted. base must be a
// distribution; out is written in place over scores.
void weighted_softmax_inplace(std::span<const double> base,
                              std::span<double> scores);

// Normalizes in place after clamping entries to at least `floor`.
void floor_and_normalize(std::span<double> p, double floor = kProbFloor);

// Samples an index from a categorical distribution.
int sample_index(std::span<const double> p, std::mt19937_64& rng);

}  // namespace vsg

#endif  // VSG_DISTRIBUTIONS_H_
