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

#ifndef VSG_MEAN_FIELD_H_
#define VSG_MEAN_FIELD_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vsg/policy.h"

namespace vsg {

// Time-indexed joint distribution L_t(s, a) of the population state-action
// pair, t = 0..T. Each slice is a distribution over S x A.
struct MeanField {
  int n_states = 0;
  int n_actions = 0;
  std::vector<std::vector<double>> l;  // [t][s * n_actions + a]

  MeanField() = default;
  MeanField(int states, int actions, int slices)
      : n_states(states), n_actions(actions),
        l(slices,
          std::vector<double>(static_cast<size_t>(states) * actions, 0.0)) {}
  int slices() const { return static_cast<int>(l.size()); }
  double at(int t, int s, int a) const {
    return l[t][static_cast<size_t>(s) * n_actions + a];
  }
  double& at(int t, int s, int a) {
    return l[t][static_cast<size_t>(s) * n_actions + a];
  }
  double max_slice_tv(const MeanField& other) const;
};

// Finite-horizon game of one representative agent against the population
// distribution. Reward and transition may depend on the current mean field;
// both are supplied as callables evaluated per (s, a, L_t).
struct MFGameSpec {
  int n_states = 0;
  int n_actions = 0;
  int horizon = 0;  // decision epochs t = 0..T with terminal rewards at T
  std::vector<double> initial;
  std::function<double(int s, int a, std::span<const double> mean_field)>
      reward;
  // Writes the row P(. | s, a, L) into `out` (length n_states).
  std::function<void(int s, int a, std::span<const double> mean_field,
                     std::span<double> out)>
      transition;
};

// Per-time-step policy with its companion prior.
struct TimePolicy {
  std::vector<StatePolicy> policy;  // t = 0..T
  std::vector<StatePolicy> prior;
};

// Forward population update:
//   L_t(s, a) = pi_t(a|s) * sum_{s~, a~} P(s | s~, a~, L_{t-1}) L_{t-1}(s~, a~).
std::vector<double> kolmogorov_step(const MFGameSpec& mf_game,
                                    std::span<const double> l_prev,
                                    const StatePolicy& pi_t);

// Full forward flow under a time-indexed policy; L_0 = initial x pi_0.
MeanField forward_flow(const MFGameSpec& mf_game,
                       const std::vector<StatePolicy>& pi);

// Backward evaluation of the KL-regularized return of a GIVEN policy:
//   Q_T = r(., ., L_T);
//   Q_t(s,a) = r(s,a,L_t) + sum_{s'} P(s'|s,a,L_t)
//              E_{a'~pi_{t+1}(.|s')}[Q_{t+1}(s',a') - log pi_{t+1}(a'|s')
//                                    + log prior_{t+1}(a'|s')].
std::vector<std::vector<double>> soft_q_backward(
    const MFGameSpec& mf_game, const MeanField& mean_field,
    const TimePolicy& policy_and_prior);

// pi_t(a|s) proportional to prior_t(a|s) exp(Q_t(s,a)), max-subtracted.
StatePolicy closed_form_policy(int n_states, int n_actions,
                               std::span<const double> q_t,
                               const StatePolicy& prior_t);

// Backward pass that interleaves the optimal policy of each slice: the
// continuation expectation then collapses to log sum_a prior exp(Q), so the
// returned policy is the exact maximizer for the frozen mean field.
struct MFBackwardResult {
  std::vector<std::vector<double>> q;  // [t][s * n_actions + a]
  std::vector<StatePolicy> policy;     // t = 0..T
};
MFBackwardResult soft_q_backward_opt(const MFGameSpec& mf_game,
                                     const MeanField& mean_field,
                                     const std::vector<StatePolicy>& prior);

enum class MFPriorMode { kPreviousIterate, kFixedUniform };

struct MFConfig {
  int outer_iters = 500;
  double residual_tol = 1e-6;
  double damping = 0.5;  // L^k <- (1-damping) L^k + damping L^{k-1}
  MFPriorMode prior_mode = MFPriorMode::kPreviousIterate;
  int trace_cadence = 0;  // snapshot the field every k iterations (0 = none)
};

struct MFResult {
  std::vector<StatePolicy> policy;  // t = 0..T
  MeanField mean_field;
  std::vector<double> residuals;  // max_t TV per outer iteration
  std::vector<std::pair<int, MeanField>> field_trace;  // cadence snapshots
  bool converged = false;
  int iterations = 0;
};

// Outer fixed point: backward solve against the frozen mean field, forward
// flow under the new policy, damped mean-field update. Non-convergence is
// reported in the result, not thrown.
MFResult run_mf_bayesian_q(const MFGameSpec& mf_game, const MFConfig& config);

// Best unregularized response against the frozen mean field minus the
// achieved unregularized return of `policy`; nonnegative up to tolerance.
double mf_exploitability(const MFGameSpec& mf_game,
                         const std::vector<StatePolicy>& policy,
                         const MeanField& mean_field);

// Single-state crowd game: base rewards [2, 1, 0] minus
// crowd_weight * L(s, a). Strong crowding spreads the equilibrium policy.
MFGameSpec crowd_aversion_toy(int horizon = 20, double crowd_weight = 8.0);

// Three-state line with movement actions, a center bonus and a per-(s,a)
// crowding penalty.
MFGameSpec crowd_line_toy(int horizon = 20, double crowd_weight = 2.0);

// Mean-field-independent two-state game (plain single-agent MDP).
MFGameSpec l_independent_toy(int horizon = 20);

}  // namespace vsg

#endif  // VSG_MEAN_FIELD_H_
