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

#include "vsg/distributions.h"

#include <algorithm>
#include <cmath>

#include "vsg/check.h"

namespace vsg {

double entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double kl(std::span<const double> p, std::span<const double> q) {
  VSG_CHECK(p.size() == q.size(), "kl: size mismatch");
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) {
        throw ParameterError("kl: support violation, q is zero where p > 0");
      }
      d += p[i] * std::log(p[i] / q[i]);
    }
  }
  return d;
}

double tv(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

bool is_distribution(std::span<const double> p, double tol) {
  double s = 0.0;
  for (double x : p) {
    if (x < 0.0 || !std::isfinite(x)) return false;
    s += x;
  }
  return std::abs(s - 1.0) <= tol;
}

void softmax_inplace(std::span<double> scores) {
  double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double& x : scores) {
    x = std::exp(x - m);
    z += x;
  }
  for (double& x : scores) x /= z;
}

void weighted_softmax_inplace(std::span<const double> base,
                              std::span<double> scores) {
  double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = base[i] * std::exp(scores[i] - m);
    z += scores[i];
  }
  VSG_CHECK(z > 0.0, "weighted_softmax: zero normalizer");
  for (double& x : scores) x /= z;
}

void floor_and_normalize(std::span<double> p, double floor) {
  double s = 0.0;
  for (double& x : p) {
    x = std::max(x, floor);
    s += x;
  }
  for (double& x : p) x /= s;
}

int sample_index(std::span<const double> p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  double c = 0.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    c += p[i];
    if (r < c) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

}  // namespace vsg
