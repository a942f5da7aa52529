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

#include "vsg/vpg.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "vsg/check.h"
#include "vsg/distributions.h"

namespace vsg {

namespace {

// State kernel K(s -> s') when every agent plays its marginal.
Eigen::MatrixXd product_state_kernel(const GameSpec& game,
                                     const std::vector<StatePolicy>& marginals) {
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(game.n_states, game.n_states);
  const int n_joint = game.joints.size();
  for (int s = 0; s < game.n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      double w = 1.0;
      for (int k = 0; k < game.n_agents; ++k)
        w *= marginals[k].at(s, game.joints.own_action(k, a));
      if (w == 0.0) continue;
      auto trans = game.transition_row(s, a);
      for (int s2 = 0; s2 < game.n_states; ++s2)
        kernel(s, s2) += w * trans[s2];
    }
  }
  return kernel;
}

std::vector<double> expected_reward_per_state(
    const GameSpec& game, const std::vector<StatePolicy>& marginals,
    int agent) {
  std::vector<double> out(game.n_states, 0.0);
  const int n_joint = game.joints.size();
  for (int s = 0; s < game.n_states; ++s) {
    double acc = 0.0;
    for (int a = 0; a < n_joint; ++a) {
      double w = 1.0;
      for (int k = 0; k < game.n_agents; ++k)
        w *= marginals[k].at(s, game.joints.own_action(k, a));
      acc += w * game.r(agent, s, a);
    }
    out[s] = acc;
  }
  return out;
}

// Unregularized expected return of the product play, one entry per agent.
std::vector<double> achieved_values(const GameSpec& game,
                                    const std::vector<StatePolicy>& marginals) {
  std::vector<double> out(game.n_agents, 0.0);
  Eigen::MatrixXd kernel = product_state_kernel(game, marginals);
  if (game.horizon.is_finite) {
    for (int i = 0; i < game.n_agents; ++i) {
      std::vector<double> rbar = expected_reward_per_state(game, marginals, i);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(game.n_states);
      for (int t = 0; t < game.horizon.steps; ++t) {
        Eigen::VectorXd nv(game.n_states);
        for (int s = 0; s < game.n_states; ++s) nv(s) = rbar[s];
        nv += kernel * v;
        v = nv;
      }
      for (int s = 0; s < game.n_states; ++s)
        out[i] += game.initial[s] * v(s);
    }
    return out;
  }
  const double disc = game.pre_discounted ? 1.0 : game.gamma;
  if (game.pre_discounted) {
    // Pin the absorbing state at value zero; its self-loop would otherwise
    // make the undiscounted system singular.
    kernel.row(game.absorbing_state).setZero();
  }
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(game.n_states, game.n_states) - disc * kernel;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  for (int i = 0; i < game.n_agents; ++i) {
    std::vector<double> rbar = expected_reward_per_state(game, marginals, i);
    Eigen::VectorXd b(game.n_states);
    for (int s = 0; s < game.n_states; ++s) b(s) = rbar[s];
    Eigen::VectorXd v = lu.solve(b);
    for (int s = 0; s < game.n_states; ++s) out[i] += game.initial[s] * v(s);
  }
  return out;
}

}  // namespace

std::vector<double> greedy_profile_return(
    const GameSpec& game, const std::vector<StatePolicy>& marginals) {
  std::vector<StatePolicy> greedy(game.n_agents);
  for (int j = 0; j < game.n_agents; ++j) {
    greedy[j] = StatePolicy(game.n_states, game.n_actions[j]);
    for (int s = 0; s < game.n_states; ++s) {
      auto row = marginals[j].row(s);
      int best = 0;
      for (int a = 1; a < game.n_actions[j]; ++a)
        if (row[a] > row[best]) best = a;
      greedy[j].at(s, best) = 1.0;
    }
  }
  std::vector<double> values = achieved_values(game, greedy);
  const double scale = game.horizon.is_finite
                           ? 1.0 / game.horizon.steps
                           : (game.pre_discounted ? 1.0 : 1.0 - game.gamma);
  for (double& v : values) v *= scale;
  return values;
}

namespace {

void mixed_softmax_row(std::span<const double> pi_row,
                       std::span<const double> scores, double mix,
                       std::span<double> out) {
  double m = -std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < out.size(); ++a) {
    double w = mix * scores[a];
    if (mix < 1.0) w += (1.0 - mix) * std::log(pi_row[a]);
    out[a] = w;
    m = std::max(m, w);
  }
  double z = 0.0;
  for (double& x : out) {
    x = std::exp(x - m);
    z += x;
  }
  for (double& x : out) x /= z;
}

}  // namespace

ConditionedPolicy npg_step(const GameSpec& game, const ConditionedPolicy& pi,
                           const SoftQTable& q, double eta, double gamma) {
  VSG_CHECK(eta > 0.0 && eta <= 1.0 - gamma,
            "npg_step: eta must lie in (0, 1-gamma]");
  const double beta = eta / (1.0 - gamma);
  const int agent = pi.agent();
  const int n_own = pi.n_own();
  const int n_opp = pi.n_opponent();
  const int n_joint = game.joints.size();
  auto compose = game.joints.compose_table(agent);

  ConditionedPolicy out(agent, pi.n_states(), n_opp, n_own);
  std::vector<double> scores(n_own);
  for (int s = 0; s < pi.n_states(); ++s) {
    for (int o = 0; o < n_opp; ++o) {
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        scores[a] = q.q[0][static_cast<size_t>(s) * n_joint + joint];
      }
      mixed_softmax_row(pi.row(s, o), scores, beta, out.row(s, o));
    }
  }
  return out;
}

StatePolicy marginal_policy(const GameSpec& game, const ConditionedPolicy& pi,
                            const OpponentModel& rho) {
  const int n_own = pi.n_own();
  StatePolicy out(game.n_states, n_own);
  for (int s = 0; s < game.n_states; ++s) {
    std::vector<double> weights = rho.joint_row(game.joints, s);
    auto row = out.row(s);
    for (int o = 0; o < pi.n_opponent(); ++o) {
      auto pi_row = pi.row(s, o);
      for (int a = 0; a < n_own; ++a) row[a] += weights[o] * pi_row[a];
    }
  }
  return out;
}

OpponentModel model_from_marginals(const GameSpec& game, int agent,
                                   const std::vector<StatePolicy>& marginals) {
  OpponentModel model = OpponentModel::uniform(game, agent);
  for (int j = 0; j < game.n_agents; ++j) {
    if (j == agent) continue;
    model.set_modelee_policy(j, marginals[j]);
  }
  return model;
}

std::vector<StatePolicy> consistent_marginals(
    const GameSpec& game, const std::vector<ConditionedPolicy>& policies,
    double tol, int max_iters) {
  std::vector<StatePolicy> m(game.n_agents);
  for (int j = 0; j < game.n_agents; ++j)
    m[j] = StatePolicy::uniform(game.n_states, game.n_actions[j]);
  double delta = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<StatePolicy> next(game.n_agents);
    for (int j = 0; j < game.n_agents; ++j) {
      OpponentModel model = model_from_marginals(game, j, m);
      next[j] = marginal_policy(game, policies[j], model);
    }
    delta = 0.0;
    for (int j = 0; j < game.n_agents; ++j)
      delta = std::max(delta, m[j].max_row_tv(next[j]));
    m = std::move(next);
    if (delta < tol) return m;
  }
  throw ConvergenceError("consistent_marginals: no fixed point reached",
                         delta);
}

std::vector<double> discounted_visitation(
    const GameSpec& game, const std::vector<StatePolicy>& marginals) {
  VSG_CHECK(!game.horizon.is_finite,
            "discounted_visitation: infinite-discounted game required");
  VSG_CHECK(!game.pre_discounted,
            "discounted_visitation: use the original discounted game");
  Eigen::MatrixXd kernel = product_state_kernel(game, marginals);
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(game.n_states, game.n_states) -
      game.gamma * kernel.transpose();
  Eigen::VectorXd b(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    b(s) = (1.0 - game.gamma) * game.initial[s];
  Eigen::VectorXd d = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(b);
  return std::vector<double>(d.data(), d.data() + game.n_states);
}

double potential_value(const GameSpec& game,
                       const std::vector<ConditionedPolicy>& policies,
                       const std::vector<OpponentModel>& models,
                       PotentialConvention convention, double eval_tol) {
  if (game.kind != GameKind::kIdenticalInterest) {
    throw ParameterError(
        "potential_value: game is not declared identical-interest");
  }
  std::vector<StatePolicy> marginals(game.n_agents);
  for (int j = 0; j < game.n_agents; ++j)
    marginals[j] = marginal_policy(game, policies[j], models[j]);

  if (convention == PotentialConvention::kOwnEntropy) {
    return elbo(game, 0, policies[0], models[0], EvalMode::kOracleOpponent,
                &marginals, eval_tol);
  }

  // Joint-entropy convention: common return plus every agent's marginal
  // entropy, under the product-of-marginals flow.
  std::vector<double> rbar = expected_reward_per_state(game, marginals, 0);
  std::vector<double> bonus(game.n_states, 0.0);
  for (int s = 0; s < game.n_states; ++s) {
    for (int j = 0; j < game.n_agents; ++j)
      bonus[s] += entropy(marginals[j].row(s));
  }
  Eigen::MatrixXd kernel = product_state_kernel(game, marginals);
  Eigen::VectorXd b(game.n_states);
  for (int s = 0; s < game.n_states; ++s) b(s) = rbar[s] + bonus[s];
  if (game.horizon.is_finite) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(game.n_states);
    for (int t = 0; t < game.horizon.steps; ++t) v = b + kernel * v;
    double out = 0.0;
    for (int s = 0; s < game.n_states; ++s) out += game.initial[s] * v(s);
    return out;
  }
  const double disc = game.pre_discounted ? 1.0 : game.gamma;
  if (game.pre_discounted) {
    kernel.row(game.absorbing_state).setZero();
    b(game.absorbing_state) = 0.0;
  }
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(game.n_states, game.n_states) - disc * kernel;
  Eigen::VectorXd v = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(b);
  double out = 0.0;
  for (int s = 0; s < game.n_states; ++s) out += game.initial[s] * v(s);
  return out;
}

double smoothness_constant(int n, double gamma, int max_actions) {
  VSG_CHECK(n >= 1, "smoothness_constant: n must be >= 1");
  VSG_CHECK(gamma > 0.0 && gamma < 1.0,
            "smoothness_constant: gamma must lie in (0, 1)");
  VSG_CHECK(max_actions >= 2, "smoothness_constant: max_actions must be >= 2");
  const double g = 1.0 - gamma;
  return 2.0 * (n + 1.0) * (n + 1.0) / (g * g * g) +
         2.0 * (n * n + n + 1.0) * (1.0 + std::log(max_actions)) / (g * g) +
         (3.0 * n + 2.0) / g;
}

VPGResult run_vpg(const GameSpec& game, const VPGConfig& config) {
  VSG_CHECK(!game.horizon.is_finite,
            "run_vpg: infinite-discounted game required");
  VSG_CHECK(!game.pre_discounted,
            "run_vpg: run on the discounted game, not its absorbing "
            "transform");
  const double gamma = game.gamma;
  const double eta = config.eta == 0.0 ? (1.0 - gamma) / 2.0 : config.eta;
  VSG_CHECK(eta > 0.0 && eta <= 1.0 - gamma,
            "run_vpg: eta must lie in (0, 1-gamma]");
  VSG_CHECK(config.policy_tol > 0.0, "run_vpg: policy_tol must be positive");

  const int n = game.n_agents;
  const bool identical = game.kind == GameKind::kIdenticalInterest;

  VPGResult result;
  result.policies.reserve(n);
  result.models.reserve(n);
  for (int i = 0; i < n; ++i) {
    result.policies.push_back(ConditionedPolicy::uniform(game, i));
    result.models.push_back(OpponentModel::uniform(game, i));
  }
  std::vector<StatePolicy> marginals(n);
  for (int j = 0; j < n; ++j)
    marginals[j] = marginal_policy(game, result.policies[j], result.models[j]);

  TrajectoryBuffer buffer(config.buffer_capacity);
  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<RewardEstimate>> reward_est;
  if (config.opponent_mode == OpponentMode::kVariational) {
    reward_est.assign(n, std::vector<RewardEstimate>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        reward_est[i][j] = RewardEstimate(game.n_states, game.joints.size(),
                                          config.om.reward_clip);
      }
    }
  }

  for (long iter = 1; iter <= config.max_iters; ++iter) {
    // Collect fresh experience from the previous round's play.
    if (config.opponent_mode != OpponentMode::kOracle) {
      for (int e = 0; e < config.episodes_per_iter; ++e)
        buffer.push(
            simulate_episode(game, marginals, config.episode_len, rng));
    }

    // (a) opponent-model refresh.
    switch (config.opponent_mode) {
      case OpponentMode::kOracle:
        for (int i = 0; i < n; ++i)
          result.models[i] = model_from_marginals(game, i, marginals);
        break;
      case OpponentMode::kEmpirical:
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            result.models[i].set_modelee_policy(
                j, empirical_state_policy(game, buffer, j, config.laplace));
          }
        }
        break;
      case OpponentMode::kVariational:
        for (int i = 0; i < n; ++i) {
          std::vector<StatePolicy> rho_all(n);
          for (int k = 0; k < n; ++k) {
            rho_all[k] = (k == i) ? marginals[i]
                                  : result.models[i].modelee_policy(k);
          }
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            FitResult fit =
                fit_opponent_model(game, buffer, j, rho_all,
                                   std::move(reward_est[i][j]), config.om, rng);
            result.models[i].set_modelee_policy(j, fit.rho_j);
            reward_est[i][j] = std::move(fit.reward);
          }
        }
        break;
    }

    // (b) evaluate each agent against its model.
    std::vector<SoftQTable> q;
    q.reserve(n);
    for (int i = 0; i < n; ++i) {
      q.push_back(soft_policy_evaluation(game, i, result.policies[i],
                                         result.models[i],
                                         EvalMode::kModeledOpponent, nullptr,
                                         config.eval_tol));
      for (double x : q.back().q[0]) {
        if (!std::isfinite(x))
          throw VsgError("run_vpg: non-finite Q at iteration " +
                         std::to_string(iter) + " for agent " +
                         std::to_string(i));
      }
    }

    // (c) one closed-form NPG step per agent.
    double tv_delta = 0.0;
    std::vector<ConditionedPolicy> next;
    next.reserve(n);
    for (int i = 0; i < n; ++i) {
      next.push_back(npg_step(game, result.policies[i], q[i], eta, gamma));
      tv_delta = std::max(tv_delta, result.policies[i].max_row_tv(next[i]));
    }

    VPGTraceRow row;
    if (config.record_trace) {
      row.iter = iter;
      row.tv_delta = tv_delta;
      row.elbo.resize(n);
      for (int i = 0; i < n; ++i) {
        double j_val = 0.0;
        for (int s = 0; s < game.n_states; ++s)
          j_val += game.initial[s] * q[i].v[0][s];
        row.elbo[i] = j_val;
      }
      row.potential = identical ? row.elbo[0]
                                : std::numeric_limits<double>::quiet_NaN();
    }

    result.policies = std::move(next);
    for (int j = 0; j < n; ++j)
      marginals[j] =
          marginal_policy(game, result.policies[j], result.models[j]);

    if (config.record_trace) {
      row.value = greedy_profile_return(game, marginals);
      if (config.metric_cadence > 0 && config.exploit_metric &&
          iter % config.metric_cadence == 0) {
        row.exploitability = config.exploit_metric(game, marginals);
        row.has_exploitability = true;
      }
      result.trace.push_back(std::move(row));
    }

    result.iterations = iter;
    if (tv_delta < config.policy_tol) {
      result.converged = true;
      break;
    }
  }
  result.marginals = marginals;
  return result;
}

FiniteSoftResult solve_finite_horizon_soft(const GameSpec& game, double mix,
                                           double tol, long max_iters) {
  VSG_CHECK(game.horizon.is_finite,
            "solve_finite_horizon_soft: finite-horizon game required");
  VSG_CHECK(mix > 0.0 && mix <= 1.0,
            "solve_finite_horizon_soft: mix must lie in (0, 1]");
  const int n = game.n_agents;
  const int horizon = game.horizon.steps;
  const int n_joint = game.joints.size();

  FiniteSoftResult result;
  result.policies.assign(n, {});
  for (int i = 0; i < n; ++i)
    result.policies[i].assign(horizon, ConditionedPolicy::uniform(game, i));
  result.marginals.assign(horizon, {});
  for (int t = 0; t < horizon; ++t) {
    result.marginals[t].resize(n);
    for (int j = 0; j < n; ++j)
      result.marginals[t][j] =
          StatePolicy::uniform(game.n_states, game.n_actions[j]);
  }

  for (long iter = 1; iter <= max_iters; ++iter) {
    double delta = 0.0;
    std::vector<std::vector<ConditionedPolicy>> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<OpponentModel> rho_t;
      rho_t.reserve(horizon);
      for (int t = 0; t < horizon; ++t)
        rho_t.push_back(model_from_marginals(game, i, result.marginals[t]));
      SoftQTable q = soft_policy_evaluation_finite(
          game, i, result.policies[i], rho_t, EvalMode::kModeledOpponent,
          nullptr);
      next[i].reserve(horizon);
      auto compose = game.joints.compose_table(i);
      const int n_own = game.n_actions[i];
      const int n_opp = game.joints.opponent_size(i);
      for (int t = 0; t < horizon; ++t) {
        ConditionedPolicy updated(i, game.n_states, n_opp, n_own);
        std::vector<double> scores(n_own);
        for (int s = 0; s < game.n_states; ++s) {
          for (int o = 0; o < n_opp; ++o) {
            for (int a = 0; a < n_own; ++a) {
              const int joint = compose[static_cast<size_t>(o) * n_own + a];
              scores[a] = q.q[t][static_cast<size_t>(s) * n_joint + joint];
            }
            mixed_softmax_row(result.policies[i][t].row(s, o), scores, mix,
                              updated.row(s, o));
          }
        }
        delta = std::max(delta, result.policies[i][t].max_row_tv(updated));
        next[i].push_back(std::move(updated));
      }
    }
    // Refresh the lagged marginals under the new policies.
    std::vector<std::vector<StatePolicy>> new_marginals(horizon);
    for (int t = 0; t < horizon; ++t) {
      new_marginals[t].resize(n);
      for (int j = 0; j < n; ++j) {
        OpponentModel model =
            model_from_marginals(game, j, result.marginals[t]);
        new_marginals[t][j] = marginal_policy(game, next[j][t], model);
      }
    }
    result.policies = std::move(next);
    result.marginals = std::move(new_marginals);
    result.iterations = iter;
    result.final_delta = delta;
    if (delta < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace vsg
