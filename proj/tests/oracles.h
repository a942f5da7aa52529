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

// Test-only reference computations. Everything here is deliberately
// implemented by sampling or literal enumeration, independent of the solver
// code paths it is used to check.

#ifndef VSG_TESTS_ORACLES_H_
#define VSG_TESTS_ORACLES_H_

#include <array>
#include <random>
#include <vector>

#include "vsg/game.h"
#include "vsg/policy.h"

namespace vsg::testing {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo estimate of the regularized return: per visited step
// r + H(pi_i(.|s, a^{-i})) - KL(rho(.|s) || pi_{-i}(.|s)), discounted,
// truncated once gamma^t < trunc_eps. Opponent actions are sampled from the
// model; `true_marginals == nullptr` drops the KL term (modeled semantics).
McEstimate mc_soft_return(const GameSpec& game, int agent,
                          const ConditionedPolicy& pi,
                          const OpponentModel& rho,
                          const std::vector<StatePolicy>* true_marginals,
                          long episodes, double trunc_eps,
                          std::mt19937_64& rng);

// Same quantity for a finite-horizon game by exhaustive enumeration of all
// (s, a^{-i}, a^i, s') branches, undiscounted.
double enumerate_soft_return(const GameSpec& game, int agent,
                             const ConditionedPolicy& pi,
                             const OpponentModel& rho,
                             const std::vector<StatePolicy>* true_marginals);

// log sum over all length-T paths of P(path) exp(sum_t (r_t - r_max)) where
// the path measure draws opponents from their true marginals and agent
// `agent` from the uniform action prior of the optimality model. The r_max
// shift keeps per-step optimality probabilities in [0, 1]. The regularized
// return of ANY conditioned policy, shifted by T (r_max + log |A_i|), lower
// bounds this quantity.
double enumerate_log_likelihood(const GameSpec& game, int agent,
                                const std::vector<StatePolicy>& true_marginals,
                                double r_max);

// Mean undiscounted return of product play on a pre-discounted game,
// stopping at the absorbing state (or step_cap).
McEstimate mc_undiscounted_return(const GameSpec& game,
                                  const std::vector<StatePolicy>& marginals,
                                  long episodes, int step_cap,
                                  std::mt19937_64& rng);

// Truncated-series discounted state visitation.
std::vector<double> truncated_visitation(
    const GameSpec& game, const std::vector<StatePolicy>& marginals,
    int terms);

// Support enumeration for one-shot 2x2 bimatrix games; payoffs indexed
// row-major over (a1, a2). Returns mixed strategies (p, q) of an exact NE.
struct MixedNE {
  std::array<double, 2> p;
  std::array<double, 2> q;
};
MixedNE support_enumeration_2x2(const std::array<double, 4>& r1,
                                const std::array<double, 4>& r2);

}  // namespace vsg::testing

#endif  // VSG_TESTS_ORACLES_H_
