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

#ifndef VSG_OPPONENT_MODELING_H_
#define VSG_OPPONENT_MODELING_H_

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "vsg/game.h"
#include "vsg/policy.h"

namespace vsg {

struct TrajectoryStep {
  int state = 0;
  int joint_action = 0;
};

// An observed or simulated play history. `log_gen_prob` is the log
// probability of the whole trajectory under its generating distribution
// (initial state, action choices and transitions), used as the importance
// denominator.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::vector<std::vector<double>> rewards;  // optional, [t][agent]
  double log_gen_prob = 0.0;
};

// Checks index ranges and that consecutive states are reachable under a
// positive-probability transition.
std::vector<std::string> validate_trajectory(const GameSpec& game,
                                             const Trajectory& traj);

// FIFO store bounded by a transition budget.
class TrajectoryBuffer {
 public:
  explicit TrajectoryBuffer(size_t capacity_transitions = 100000)
      : capacity_(capacity_transitions) {}
  void push(Trajectory traj);
  const std::deque<Trajectory>& data() const { return trajs_; }
  size_t n_transitions() const { return transitions_; }
  bool empty() const { return trajs_.empty(); }

 private:
  std::deque<Trajectory> trajs_;
  size_t capacity_;
  size_t transitions_ = 0;
};

// Tabular reward estimate r_hat^j(s, a) over state x joint action. The
// parameters are the table entries themselves.
struct RewardEstimate {
  int n_states = 0;
  int n_joint = 0;
  std::vector<double> table;  // [s * n_joint + a]
  double clip = 10.0;

  RewardEstimate() = default;
  RewardEstimate(int states, int joint, double clip_bound = 10.0)
      : n_states(states), n_joint(joint),
        table(static_cast<size_t>(states) * joint, 0.0), clip(clip_bound) {}
  double at(int s, int a) const {
    return table[static_cast<size_t>(s) * n_joint + a];
  }
  double& at(int s, int a) {
    return table[static_cast<size_t>(s) * n_joint + a];
  }
};

struct OmConfig {
  double step = 0.5;          // gradient step on the reward table
  int inner_iters = 2;        // alternation sweeps per fit call
  int m_rollouts = 64;        // model rollouts per gradient estimate
  int horizon_trunc = 0;      // 0 => ceil(log(1e-3) / log gamma)
  double log_w_clip = 50.0;   // clip on log importance weights
  double reward_clip = 10.0;  // clip bound on reward-table entries
  double laplace = 1.0;       // smoothing for the empirical prior
  double q_tol = 1e-9;
};

int default_horizon_trunc(double gamma);

// Simulates one episode where every agent plays its state-conditioned
// marginal policy. Records per-agent rewards and the generating log-prob.
Trajectory simulate_episode(const GameSpec& game,
                            const std::vector<StatePolicy>& marginals,
                            int episode_len, std::mt19937_64& rng);

// Rollout used for the importance-sampled term of the reward gradient; all
// agents' actions are drawn from the supplied per-agent model.
Trajectory rollout_from_model(const GameSpec& game,
                              const std::vector<StatePolicy>& rho_all,
                              int len, std::mt19937_64& rng);

// Laplace-smoothed state-conditioned action frequencies of agent j.
StatePolicy empirical_state_policy(const GameSpec& game,
                                   const TrajectoryBuffer& buffer, int j,
                                   double alpha = 1.0);

// Soft action value of the modeled agent j under the joint model:
//   Q(s, a) = r_hat(s, a) - KL(rho_{-j}(.|s) || pi_{-j}(.|s))
//             + disc * E_{s'~P, a'~rho}[Q(s', a')
//                                       - KL(rho_j(.|s') || prior_j(.|s'))]
// The immediate KL term is dropped (0) when `true_others` is null; the
// future KL penalizes the model against the prior. Returns the table
// [s * n_joint + a], solved to sup-norm tolerance tol.
std::vector<double> soft_q_rho(const GameSpec& game, int j,
                               const std::vector<StatePolicy>& rho_all,
                               const RewardEstimate& reward,
                               const PriorPolicy& prior_j,
                               const std::vector<StatePolicy>* true_others,
                               double tol = 1e-9, long max_iters = 1000000);

// rho_j*(a^j|s) proportional to prior(a^j|s) * exp(E_{a^{-j}~rho_{-j}} Q),
// max-subtracted.
StatePolicy optimal_opponent_policy(const GameSpec& game, int j,
                                    const std::vector<double>& q_rho,
                                    const PriorPolicy& prior_j,
                                    const std::vector<StatePolicy>& rho_all);

// Gradient of the trajectory-matching objective w.r.t. the tabular reward
// parameters:
//   G(s,a) = -E_data[sum_t gamma^t 1{(s_t,a_t)=(s,a)}]
//            + (1/Z) E_model[w * sum_t gamma^t 1{(s_t,a_t)=(s,a)}],
// with w = exp(sum_t gamma^t r_hat(s_t,a_t)) / rho(tau) self-normalized over
// the model rollouts (log-weights are max-subtracted and clipped).
std::vector<double> reward_gradient(const GameSpec& game,
                                    const std::vector<const Trajectory*>& data,
                                    const std::vector<const Trajectory*>& model_rollouts,
                                    const RewardEstimate& reward, double gamma,
                                    int horizon_trunc,
                                    double log_w_clip = 50.0);

struct FitResult {
  StatePolicy rho_j;
  RewardEstimate reward;
};

// Alternates reward-gradient steps with model refreshes: update r_hat by one
// descending step, re-solve the soft opponent value, re-derive rho_j in
// closed form. `rho_all` carries the modeler's view of every agent (its own
// marginal at its index); entry j is the warm start and is updated in place.
FitResult fit_opponent_model(const GameSpec& game,
                             const TrajectoryBuffer& buffer, int j,
                             std::vector<StatePolicy>& rho_all,
                             RewardEstimate reward, const OmConfig& config,
                             std::mt19937_64& rng);

}  // namespace vsg

#endif  // VSG_OPPONENT_MODELING_H_
