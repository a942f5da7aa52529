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

#include "vsg/equilibria_ext.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsg/check.h"
#include "vsg/distributions.h"
#include "vsg/oracle.h"

namespace vsg {

std::vector<std::string> validate_scheme(const SignalScheme& scheme) {
  std::vector<std::string> violations;
  if (scheme.sigma.empty()) {
    violations.push_back("sigma: at least one signal required");
    return violations;
  }
  double sum = 0.0;
  for (size_t w = 0; w < scheme.sigma.size(); ++w) {
    if (scheme.sigma[w] < 0.0)
      violations.push_back("sigma[" + std::to_string(w) + "]: negative");
    sum += scheme.sigma[w];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    violations.push_back("sigma: sums to " + std::to_string(sum));
  return violations;
}

GameSpec augment_with_signal(const GameSpec& game,
                             const SignalScheme& scheme) {
  VSG_CHECK(validate_scheme(scheme).empty(),
            "augment_with_signal: invalid signal scheme");
  const int n_sig = scheme.n_signals();
  GameSpec out;
  out.n_agents = game.n_agents;
  out.n_states = game.n_states * n_sig;
  out.n_actions = game.n_actions;
  out.allocate();
  out.gamma = game.gamma;
  out.horizon = game.horizon;
  out.kind = game.kind;

  const int n_joint = game.joints.size();
  for (int s = 0; s < game.n_states; ++s) {
    for (int w = 0; w < n_sig; ++w) {
      const int aug = s * n_sig + w;
      out.initial[aug] = game.initial[s] * scheme.sigma[w];
      for (int a = 0; a < n_joint; ++a) {
        for (int i = 0; i < game.n_agents; ++i)
          out.r(i, aug, a) = game.r(i, s, a);
        auto src = game.transition_row(s, a);
        auto dst = out.transition_row(aug, a);
        for (int s2 = 0; s2 < game.n_states; ++s2) {
          for (int w2 = 0; w2 < n_sig; ++w2)
            dst[s2 * n_sig + w2] = src[s2] * scheme.sigma[w2];
        }
      }
    }
  }
  return out;
}

std::vector<double> correlated_device(
    const GameSpec& augmented, const SignalScheme& scheme,
    const std::vector<ConditionedPolicy>& policies,
    const std::vector<OpponentModel>& models) {
  const int n_sig = scheme.n_signals();
  VSG_CHECK(augmented.n_states % n_sig == 0,
            "correlated_device: state count is not a multiple of |Omega|");
  const int n_base = augmented.n_states / n_sig;
  const int n_joint = augmented.joints.size();

  std::vector<StatePolicy> marginals(augmented.n_agents);
  for (int i = 0; i < augmented.n_agents; ++i)
    marginals[i] = marginal_policy(augmented, policies[i], models[i]);

  std::vector<double> device(static_cast<size_t>(n_base) * n_joint, 0.0);
  for (int s = 0; s < n_base; ++s) {
    for (int w = 0; w < n_sig; ++w) {
      const int aug = s * n_sig + w;
      for (int a = 0; a < n_joint; ++a) {
        double p = scheme.sigma[w];
        for (int i = 0; i < augmented.n_agents; ++i)
          p *= marginals[i].at(aug, augmented.joints.own_action(i, a));
        device[static_cast<size_t>(s) * n_joint + a] += p;
      }
    }
  }
  return device;
}

CEResult solve_correlated(const GameSpec& game, const SignalScheme& scheme,
                          const VPGConfig& config) {
  CEResult result;
  result.augmented = augment_with_signal(game, scheme);
  result.vpg = run_vpg(result.augmented, config);
  result.device = correlated_device(result.augmented, scheme,
                                    result.vpg.policies, result.vpg.models);
  ExploitabilityReport report =
      exploitability(result.augmented, result.vpg.marginals);
  result.deviation_gaps = report.gaps;
  return result;
}

StatePolicy zero_sum_opponent_update(const GameSpec& game,
                                     const SoftQTable& q_i,
                                     const PriorPolicy& prior_opponent,
                                     const StatePolicy& own_marginal) {
  VSG_CHECK(game.kind == GameKind::kZeroSumTwoPlayer && game.n_agents == 2,
            "zero_sum_opponent_update: two-player zero-sum game required");
  const int agent = q_i.agent;
  const int n_own = game.n_actions[agent];
  const int n_opp = game.joints.opponent_size(agent);
  const int n_joint = game.joints.size();
  auto compose = game.joints.compose_table(agent);

  StatePolicy out(game.n_states, n_opp);
  std::vector<double> scores(n_opp);
  for (int s = 0; s < game.n_states; ++s) {
    for (int o = 0; o < n_opp; ++o) {
      double expected = 0.0;
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        expected += own_marginal.at(s, a) *
                    q_i.q[0][static_cast<size_t>(s) * n_joint + joint];
      }
      scores[o] = -expected;
    }
    weighted_softmax_inplace(prior_opponent.row(s), scores);
    std::copy(scores.begin(), scores.end(), out.row(s).begin());
  }
  return out;
}

VPGResult solve_zero_sum(const GameSpec& game, const VPGConfig& config) {
  VSG_CHECK(game.kind == GameKind::kZeroSumTwoPlayer && game.n_agents == 2,
            "solve_zero_sum: two-player zero-sum game required");
  VSG_CHECK(!game.horizon.is_finite,
            "solve_zero_sum: infinite-discounted game required");
  const double gamma = game.gamma;
  const double eta = config.eta == 0.0 ? (1.0 - gamma) / 2.0 : config.eta;
  VSG_CHECK(eta > 0.0 && eta <= 1.0 - gamma,
            "solve_zero_sum: eta must lie in (0, 1-gamma]");

  VPGResult result;
  for (int i = 0; i < 2; ++i) {
    result.policies.push_back(ConditionedPolicy::uniform(game, i));
    result.models.push_back(OpponentModel::uniform(game, i));
  }
  std::vector<StatePolicy> marginals(2);
  for (int j = 0; j < 2; ++j)
    marginals[j] = marginal_policy(game, result.policies[j], result.models[j]);

  for (long iter = 1; iter <= config.max_iters; ++iter) {
    std::vector<SoftQTable> q;
    q.reserve(2);
    for (int i = 0; i < 2; ++i) {
      q.push_back(soft_policy_evaluation(game, i, result.policies[i],
                                         result.models[i],
                                         EvalMode::kModeledOpponent, nullptr,
                                         config.eval_tol));
    }
    // The opponent model refresh follows the action-value refresh: the
    // previous model is the prior of the analytic update.
    for (int i = 0; i < 2; ++i) {
      const int other = 1 - i;
      StatePolicy updated = zero_sum_opponent_update(
          game, q[i], result.models[i].modelee_policy(other), marginals[i]);
      result.models[i].set_modelee_policy(other, updated);
    }

    double tv_delta = 0.0;
    std::vector<ConditionedPolicy> next;
    next.reserve(2);
    for (int i = 0; i < 2; ++i) {
      next.push_back(npg_step(game, result.policies[i], q[i], eta, gamma));
      tv_delta = std::max(tv_delta, result.policies[i].max_row_tv(next[i]));
    }

    VPGTraceRow row;
    if (config.record_trace) {
      row.iter = iter;
      row.tv_delta = tv_delta;
      row.elbo.resize(2);
      for (int i = 0; i < 2; ++i) {
        double j_val = 0.0;
        for (int s = 0; s < game.n_states; ++s)
          j_val += game.initial[s] * q[i].v[0][s];
        row.elbo[i] = j_val;
      }
      row.potential = std::numeric_limits<double>::quiet_NaN();
    }

    result.policies = std::move(next);
    for (int j = 0; j < 2; ++j)
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

}  // namespace vsg
