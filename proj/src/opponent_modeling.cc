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

#include "vsg/opponent_modeling.h"

#include <algorithm>
#include <cmath>

#include "vsg/check.h"
#include "vsg/distributions.h"

namespace vsg {

namespace {

double effective_discount(const GameSpec& game) {
  return game.pre_discounted ? 1.0 : game.gamma;
}

// Product probability of a joint action under per-agent state policies.
double joint_action_prob(const GameSpec& game,
                         const std::vector<StatePolicy>& policies, int s,
                         int joint) {
  double p = 1.0;
  for (int k = 0; k < game.n_agents; ++k)
    p *= policies[k].at(s, game.joints.own_action(k, joint));
  return p;
}

}  // namespace

std::vector<std::string> validate_trajectory(const GameSpec& game,
                                             const Trajectory& traj) {
  std::vector<std::string> violations;
  for (size_t t = 0; t < traj.steps.size(); ++t) {
    const auto& step = traj.steps[t];
    if (step.state < 0 || step.state >= game.n_states)
      violations.push_back("step " + std::to_string(t) + ": state out of range");
    else if (step.joint_action < 0 || step.joint_action >= game.joints.size())
      violations.push_back("step " + std::to_string(t) +
                           ": joint action out of range");
    else if (t + 1 < traj.steps.size()) {
      int s2 = traj.steps[t + 1].state;
      if (s2 >= 0 && s2 < game.n_states &&
          game.p(step.state, step.joint_action, s2) <= 0.0)
        violations.push_back("step " + std::to_string(t) +
                             ": zero-probability transition");
    }
  }
  return violations;
}

void TrajectoryBuffer::push(Trajectory traj) {
  transitions_ += traj.steps.size();
  trajs_.push_back(std::move(traj));
  while (transitions_ > capacity_ && trajs_.size() > 1) {
    transitions_ -= trajs_.front().steps.size();
    trajs_.pop_front();
  }
}

int default_horizon_trunc(double gamma) {
  if (gamma <= 0.0) return 1;
  return static_cast<int>(std::ceil(std::log(1e-3) / std::log(gamma)));
}

Trajectory simulate_episode(const GameSpec& game,
                            const std::vector<StatePolicy>& marginals,
                            int episode_len, std::mt19937_64& rng) {
  Trajectory traj;
  traj.steps.reserve(episode_len);
  traj.rewards.reserve(episode_len);
  int s = sample_index(game.initial, rng);
  traj.log_gen_prob = std::log(std::max(game.initial[s], kProbFloor));
  std::vector<int> actions(game.n_agents);
  for (int t = 0; t < episode_len; ++t) {
    for (int k = 0; k < game.n_agents; ++k) {
      actions[k] = sample_index(marginals[k].row(s), rng);
      traj.log_gen_prob +=
          std::log(std::max(marginals[k].at(s, actions[k]), kProbFloor));
    }
    int joint = game.joints.encode(actions);
    traj.steps.push_back({s, joint});
    std::vector<double> r(game.n_agents);
    for (int k = 0; k < game.n_agents; ++k) r[k] = game.r(k, s, joint);
    traj.rewards.push_back(std::move(r));
    int s2 = sample_index(game.transition_row(s, joint), rng);
    if (t + 1 < episode_len)
      traj.log_gen_prob += std::log(std::max(game.p(s, joint, s2), kProbFloor));
    s = s2;
  }
  return traj;
}

Trajectory rollout_from_model(const GameSpec& game,
                              const std::vector<StatePolicy>& rho_all,
                              int len, std::mt19937_64& rng) {
  return simulate_episode(game, rho_all, len, rng);
}

StatePolicy empirical_state_policy(const GameSpec& game,
                                   const TrajectoryBuffer& buffer, int j,
                                   double alpha) {
  StatePolicy counts(game.n_states, game.n_actions[j]);
  for (const Trajectory& traj : buffer.data()) {
    for (const TrajectoryStep& step : traj.steps)
      counts.at(step.state, game.joints.own_action(j, step.joint_action)) +=
          1.0;
  }
  for (int s = 0; s < game.n_states; ++s) {
    auto row = counts.row(s);
    double total = 0.0;
    for (double c : row) total += c + alpha;
    for (double& c : row) c = (c + alpha) / total;
  }
  return counts;
}

std::vector<double> soft_q_rho(const GameSpec& game, int j,
                               const std::vector<StatePolicy>& rho_all,
                               const RewardEstimate& reward,
                               const PriorPolicy& prior_j,
                               const std::vector<StatePolicy>* true_others,
                               double tol, long max_iters) {
  VSG_CHECK(!game.horizon.is_finite,
            "soft_q_rho: infinite-discounted view required");
  const double disc = effective_discount(game);
  VSG_CHECK(game.pre_discounted || game.gamma < 1.0,
            "soft_q_rho: non-contractive discount");
  const int n_joint = game.joints.size();

  // State-only terms of the recursion.
  std::vector<double> kl_immediate(game.n_states, 0.0);
  std::vector<double> kl_prior(game.n_states, 0.0);
  for (int s = 0; s < game.n_states; ++s) {
    if (true_others != nullptr) {
      double d = 0.0;
      for (int k = 0; k < game.n_agents; ++k) {
        if (k == j) continue;
        d += kl(rho_all[k].row(s), (*true_others)[k].row(s));
      }
      kl_immediate[s] = d;
    }
    kl_prior[s] = kl(rho_all[j].row(s), prior_j.row(s));
  }

  // Expected continuation e(s) = E_{a~rho}[Q(s,a)] - KL(rho_j || prior_j)(s).
  std::vector<double> q(static_cast<size_t>(game.n_states) * n_joint, 0.0);
  std::vector<double> e_prev(game.n_states, 0.0);
  std::vector<double> e_next(game.n_states, 0.0);
  double residual = 0.0;
  for (long it = 0; it < max_iters; ++it) {
    for (int s = 0; s < game.n_states; ++s) {
      if (game.pre_discounted && s == game.absorbing_state) {
        for (int a = 0; a < n_joint; ++a)
          q[static_cast<size_t>(s) * n_joint + a] = 0.0;
        e_next[s] = 0.0;
        continue;
      }
      double ev = 0.0;
      for (int a = 0; a < n_joint; ++a) {
        double cont = 0.0;
        auto trans = game.transition_row(s, a);
        for (int s2 = 0; s2 < game.n_states; ++s2)
          cont += trans[s2] * e_prev[s2];
        double qa = reward.at(s, a) - kl_immediate[s] + disc * cont;
        q[static_cast<size_t>(s) * n_joint + a] = qa;
        ev += joint_action_prob(game, rho_all, s, a) * qa;
      }
      e_next[s] = ev - kl_prior[s];
    }
    residual = 0.0;
    for (int s = 0; s < game.n_states; ++s)
      residual = std::max(residual, std::abs(e_next[s] - e_prev[s]));
    e_prev = e_next;
    if (residual < tol) return q;
  }
  throw ConvergenceError("soft_q_rho: iteration cap hit", residual);
}

StatePolicy optimal_opponent_policy(const GameSpec& game, int j,
                                    const std::vector<double>& q_rho,
                                    const PriorPolicy& prior_j,
                                    const std::vector<StatePolicy>& rho_all) {
  const int n_own = game.n_actions[j];
  const int n_opp = game.joints.opponent_size(j);
  const int n_joint = game.joints.size();
  auto compose = game.joints.compose_table(j);

  StatePolicy out(game.n_states, n_own);
  std::vector<double> scores(n_own);
  for (int s = 0; s < game.n_states; ++s) {
    for (int a = 0; a < n_own; ++a) {
      double expected = 0.0;
      for (int o = 0; o < n_opp; ++o) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        double w = 1.0;
        std::vector<int> others = game.joints.decode_opponent(j, o);
        int k_pos = 0;
        for (int k = 0; k < game.n_agents; ++k) {
          if (k == j) continue;
          w *= rho_all[k].at(s, others[k_pos]);
          ++k_pos;
        }
        expected += w * q_rho[static_cast<size_t>(s) * n_joint + joint];
      }
      scores[a] = expected;
    }
    weighted_softmax_inplace(prior_j.row(s), scores);
    auto row = out.row(s);
    std::copy(scores.begin(), scores.end(), row.begin());
  }
  return out;
}

std::vector<double> reward_gradient(const GameSpec& game,
                                    const std::vector<const Trajectory*>& data,
                                    const std::vector<const Trajectory*>& model_rollouts,
                                    const RewardEstimate& reward, double gamma,
                                    int horizon_trunc, double log_w_clip) {
  VSG_CHECK(!data.empty(), "reward_gradient: no data trajectories");
  const int n_joint = game.joints.size();
  std::vector<double> grad(static_cast<size_t>(game.n_states) * n_joint, 0.0);

  // Data term: mean discounted visit counts.
  for (const Trajectory* traj : data) {
    int len = std::min<int>(static_cast<int>(traj->steps.size()),
                            horizon_trunc);
    double disc = 1.0;
    for (int t = 0; t < len; ++t) {
      grad[static_cast<size_t>(traj->steps[t].state) * n_joint +
           traj->steps[t].joint_action] -= disc / data.size();
      disc *= gamma;
    }
  }

  if (model_rollouts.empty()) return grad;

  // Model term: self-normalized importance weights
  // w = exp(sum_t gamma^t r_hat) / rho(tau).
  std::vector<double> log_w(model_rollouts.size());
  for (size_t m = 0; m < model_rollouts.size(); ++m) {
    const Trajectory* traj = model_rollouts[m];
    int len = std::min<int>(static_cast<int>(traj->steps.size()),
                            horizon_trunc);
    double ret = 0.0, disc = 1.0;
    for (int t = 0; t < len; ++t) {
      ret += disc * reward.at(traj->steps[t].state, traj->steps[t].joint_action);
      disc *= gamma;
    }
    log_w[m] = std::clamp(ret - traj->log_gen_prob, -log_w_clip, log_w_clip);
  }
  double max_log_w = *std::max_element(log_w.begin(), log_w.end());
  double z = 0.0;
  std::vector<double> w(model_rollouts.size());
  for (size_t m = 0; m < model_rollouts.size(); ++m) {
    w[m] = std::exp(log_w[m] - max_log_w);
    z += w[m];
  }
  if (!(z > 1e-300) || !std::isfinite(z)) {
    throw DegenerateWeightsError(
        "reward_gradient: importance weights collapsed; tighten the clip or "
        "rescale the reward estimate");
  }
  for (size_t m = 0; m < model_rollouts.size(); ++m) {
    const Trajectory* traj = model_rollouts[m];
    int len = std::min<int>(static_cast<int>(traj->steps.size()),
                            horizon_trunc);
    double disc = 1.0;
    const double weight = w[m] / z;
    for (int t = 0; t < len; ++t) {
      grad[static_cast<size_t>(traj->steps[t].state) * n_joint +
           traj->steps[t].joint_action] += weight * disc;
      disc *= gamma;
    }
  }
  return grad;
}

FitResult fit_opponent_model(const GameSpec& game,
                             const TrajectoryBuffer& buffer, int j,
                             std::vector<StatePolicy>& rho_all,
                             RewardEstimate reward, const OmConfig& config,
                             std::mt19937_64& rng) {
  VSG_CHECK(!buffer.empty(), "fit_opponent_model: empty trajectory buffer");
  const double gamma = game.gamma;
  const int horizon = config.horizon_trunc > 0 ? config.horizon_trunc
                                               : default_horizon_trunc(gamma);

  PriorPolicy prior = empirical_state_policy(game, buffer, j, config.laplace);

  std::vector<const Trajectory*> data;
  data.reserve(buffer.data().size());
  for (const Trajectory& traj : buffer.data()) data.push_back(&traj);

  for (int sweep = 0; sweep < config.inner_iters; ++sweep) {
    std::vector<Trajectory> rollouts;
    rollouts.reserve(config.m_rollouts);
    std::vector<const Trajectory*> rollout_ptrs;
    for (int m = 0; m < config.m_rollouts; ++m) {
      rollouts.push_back(rollout_from_model(game, rho_all, horizon, rng));
      rollout_ptrs.push_back(&rollouts.back());
    }
    std::vector<double> grad =
        reward_gradient(game, data, rollout_ptrs, reward, gamma, horizon,
                        config.log_w_clip);
    for (size_t k = 0; k < reward.table.size(); ++k) {
      reward.table[k] = std::clamp(reward.table[k] - config.step * grad[k],
                                   -reward.clip, reward.clip);
    }
    std::vector<double> q =
        soft_q_rho(game, j, rho_all, reward, prior, nullptr, config.q_tol);
    rho_all[j] = optimal_opponent_policy(game, j, q, prior, rho_all);
    for (int s = 0; s < game.n_states; ++s)
      floor_and_normalize(rho_all[j].row(s));
  }
  return FitResult{rho_all[j], std::move(reward)};
}

}  // namespace vsg
