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

#ifndef VSG_VPG_H_
#define VSG_VPG_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "vsg/game.h"
#include "vsg/opponent_modeling.h"
#include "vsg/policy.h"
#include "vsg/soft_eval.h"

namespace vsg {

enum class OpponentMode { kOracle, kEmpirical, kVariational };

struct VPGConfig {
  double eta = 0.0;  // 0 resolves to (1 - gamma) / 2
  long max_iters = 2000;
  double policy_tol = 1e-8;  // sup TV between successive joint policies
  OpponentMode opponent_mode = OpponentMode::kOracle;
  std::uint64_t seed = 0;
  double eval_tol = 1e-10;

  // Simulation knobs for Empirical / Variational modes.
  int episodes_per_iter = 4;
  int episode_len = 25;
  size_t buffer_capacity = 100000;
  double laplace = 1.0;  // Empirical-mode smoothing
  OmConfig om;

  bool record_trace = true;
  // Optional exploitability metric, invoked on the played marginals every
  // metric_cadence iterations (0 disables it).
  int metric_cadence = 0;
  std::function<double(const GameSpec&, const std::vector<StatePolicy>&)>
      exploit_metric;
};

struct VPGTraceRow {
  long iter = 0;
  double potential = 0.0;  // agent 1's regularized value; NaN if not tracked
  double tv_delta = 0.0;
  std::vector<double> elbo;   // per agent
  std::vector<double> value;  // per agent, unregularized achieved return
  double exploitability = 0.0;
  bool has_exploitability = false;
};

struct VPGResult {
  std::vector<ConditionedPolicy> policies;
  std::vector<OpponentModel> models;
  std::vector<StatePolicy> marginals;  // played marginals of the final point
  std::vector<VPGTraceRow> trace;
  bool converged = false;
  long iterations = 0;
};

// Closed-form natural policy gradient update, row-wise over (s, a^{-i}):
//   pi'(a|s,c) = pi(a|s,c)^(1 - eta/(1-gamma)) * exp(eta Q(s,a,c)/(1-gamma)) / Z.
// Requires eta in (0, 1-gamma].
ConditionedPolicy npg_step(const GameSpec& game, const ConditionedPolicy& pi,
                           const SoftQTable& q, double eta, double gamma);

// pi_i(a|s) = sum_{a^{-i}} rho(a^{-i}|s) pi_i(a|s, a^{-i}).
StatePolicy marginal_policy(const GameSpec& game, const ConditionedPolicy& pi,
                            const OpponentModel& rho);

// Builds agent i's opponent model whose modelee rows are the given marginals.
OpponentModel model_from_marginals(const GameSpec& game, int agent,
                                   const std::vector<StatePolicy>& marginals);

// Self-consistent played marginals: m_j = marginal of pi_j when every agent
// models the others by the same marginals. Fixed-point iteration from
// uniform.
std::vector<StatePolicy> consistent_marginals(
    const GameSpec& game, const std::vector<ConditionedPolicy>& policies,
    double tol = 1e-13, int max_iters = 10000);

// Solves d = (1-gamma) initial + gamma K^T d for the product-of-marginals
// state kernel K; the result sums to one.
std::vector<double> discounted_visitation(
    const GameSpec& game, const std::vector<StatePolicy>& marginals);

// Conventions for the potential of an identical-interest game. kOwnEntropy
// is agent 1's regularized value (its own conditional entropy, its own
// model KL). kJointEntropy adds every agent's marginal entropy to the
// common return, the bookkeeping used by the smoothness analysis.
enum class PotentialConvention { kOwnEntropy, kJointEntropy };

double potential_value(const GameSpec& game,
                       const std::vector<ConditionedPolicy>& policies,
                       const std::vector<OpponentModel>& models,
                       PotentialConvention convention,
                       double eval_tol = 1e-10);

// Smoothness constant of the potential:
//   L = 2(n+1)^2/(1-g)^3 + 2(n^2+n+1)(1+log maxA)/(1-g)^2 + (3n+2)/(1-g).
double smoothness_constant(int n, double gamma, int max_actions);

// Per-step unregularized return of the deterministic deployment profile
// (the argmax of every marginal, ties to the lowest index); the `value`
// learning-curve metric.
std::vector<double> greedy_profile_return(
    const GameSpec& game, const std::vector<StatePolicy>& marginals);

// Decentralized variational policy gradient. Each round every agent
// refreshes its opponent model (mode-dependent), evaluates its soft Q
// against the model, and takes one closed-form NPG step; rounds are
// synchronous. Stops when the sup TV between successive joint policies
// drops below policy_tol.
VPGResult run_vpg(const GameSpec& game, const VPGConfig& config);

// Finite-horizon analog: time-indexed policies, damped soft best-response
// rounds pi_t' ∝ pi_t^(1-mix) exp(mix Q_t) against lagged marginals.
struct FiniteSoftResult {
  std::vector<std::vector<ConditionedPolicy>> policies;  // [agent][t]
  std::vector<std::vector<StatePolicy>> marginals;       // [t][agent]
  bool converged = false;
  long iterations = 0;
  double final_delta = 0.0;
};

FiniteSoftResult solve_finite_horizon_soft(const GameSpec& game, double mix,
                                           double tol, long max_iters);

}  // namespace vsg

#endif  // VSG_VPG_H_
