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

#ifndef VSG_SOFT_EVAL_H_
#define VSG_SOFT_EVAL_H_

#include <vector>

#include "vsg/game.h"
#include "vsg/policy.h"

namespace vsg {

// OracleOpponent: the opponents' true marginal policies are known and the
// KL(rho || pi_{-i}) penalty is active. ModeledOpponent: the model rho
// stands in for pi_{-i} everywhere and the KL term vanishes identically.
enum class EvalMode { kOracleOpponent, kModeledOpponent };

// Entropy/KL-regularized action values of one agent:
//   Q^i(s, a^i, a^{-i}) = r^i(s, a) + log pi_{-i}(a^{-i}|s)
//                         + disc * sum_{s'} P(s'|s, a) V^i(s')
//   V^i(s) = E_{a^{-i}~rho, a^i~pi_i}[Q^i - log pi_i(a^i|s,a^{-i})
//                                         - log rho(a^{-i}|s)]
// Infinite-horizon evaluations hold a single slice; finite horizons hold
// one slice per decision epoch t = 0..T-1 (computed undiscounted).
struct SoftQTable {
  int agent = 0;
  EvalMode mode = EvalMode::kModeledOpponent;
  std::vector<std::vector<double>> q;  // [t][s * n_joint + joint]
  std::vector<std::vector<double>> v;  // [t][s]

  int slices() const { return static_cast<int>(q.size()); }
  double q_at(int t, int s, int joint, int n_joint) const {
    return q[t][static_cast<size_t>(s) * n_joint + joint];
  }
  double v_at(int t, int s) const { return v[t][s]; }
};

// Solves the Bellman system above for a stationary policy and model, by
// synchronous fixed-point iteration to sup-norm residual < tol (infinite
// horizon) or one backward pass (finite horizon). In kOracleOpponent mode
// `true_marginals` must supply every opponent's state-conditioned marginal;
// in kModeledOpponent mode it must be null.
SoftQTable soft_policy_evaluation(
    const GameSpec& game, int agent, const ConditionedPolicy& pi,
    const OpponentModel& rho, EvalMode mode,
    const std::vector<StatePolicy>* true_marginals, double tol = 1e-10,
    long max_iters = 1000000);

// Time-indexed variant for finite-horizon games: each argument has either T
// entries or a single entry that is replicated across epochs.
SoftQTable soft_policy_evaluation_finite(
    const GameSpec& game, int agent,
    const std::vector<ConditionedPolicy>& pi_t,
    const std::vector<OpponentModel>& rho_t, EvalMode mode,
    const std::vector<std::vector<StatePolicy>>* true_marginals_t);

// J(pi_i, s_0; pi_{-i}) = E_{s_0 ~ initial}[V^i(s_0)].
double elbo(const GameSpec& game, int agent, const ConditionedPolicy& pi,
            const OpponentModel& rho, EvalMode mode,
            const std::vector<StatePolicy>* true_marginals,
            double tol = 1e-10);

// pi_i(a^i | s, a^{-i}) = softmax_{a^i} Q^i(s, a^i, a^{-i}), max-subtracted.
// Uses slice 0 of q.
ConditionedPolicy soft_best_response(const GameSpec& game,
                                     const SoftQTable& q_table, int agent);

}  // namespace vsg

#endif  // VSG_SOFT_EVAL_H_
