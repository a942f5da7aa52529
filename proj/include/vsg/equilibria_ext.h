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

#ifndef VSG_EQUILIBRIA_EXT_H_
#define VSG_EQUILIBRIA_EXT_H_

#include <vector>

#include "vsg/game.h"
#include "vsg/soft_eval.h"
#include "vsg/vpg.h"

namespace vsg {

// A public correlation device: a fresh signal omega ~ sigma is drawn i.i.d.
// at every step and observed by all agents.
struct SignalScheme {
  std::vector<double> sigma;
  int n_signals() const { return static_cast<int>(sigma.size()); }
};

std::vector<std::string> validate_scheme(const SignalScheme& scheme);

// Folds the signal into the state: states become (s, omega) with index
// s * |Omega| + omega, transition to (s', omega') has probability
// sigma(omega') P(s'|s, a), rewards are copied (independent of omega) and
// the initial distribution becomes initial(s) sigma(omega).
GameSpec augment_with_signal(const GameSpec& game, const SignalScheme& scheme);

// mu(a | s) = sum_omega sigma(omega) prod_i m_i(a^i | (s, omega)) where m_i
// is agent i's played marginal on the augmented game. Row-major
// [s_base * n_joint + a]; agents are conditionally independent given omega
// and correlated once omega is marginalized out.
std::vector<double> correlated_device(
    const GameSpec& augmented, const SignalScheme& scheme,
    const std::vector<ConditionedPolicy>& policies,
    const std::vector<OpponentModel>& models);

struct CEResult {
  VPGResult vpg;                       // solved on the augmented game
  GameSpec augmented;
  std::vector<double> device;          // [s_base * n_joint + a]
  std::vector<double> deviation_gaps;  // per agent, signal-measurable
};

// Runs the Nash solver on the signal-augmented game and certifies the
// device: per-agent gap of the exact best response on the augmented game
// (deviations may condition on the signal) against the achieved value.
CEResult solve_correlated(const GameSpec& game, const SignalScheme& scheme,
                          const VPGConfig& config);

// Closed-form opponent update of the zero-sum specialization:
//   rho(a^{-i}|s) propto prior(a^{-i}|s) exp(-E_{a^i ~ own}[Q^i(s, a)]).
// No reward estimation is involved; the opponent's objective is known.
StatePolicy zero_sum_opponent_update(const GameSpec& game,
                                     const SoftQTable& q_i,
                                     const PriorPolicy& prior_opponent,
                                     const StatePolicy& own_marginal);

// VPG with the opponent-model refresh replaced by the analytic zero-sum
// update, applied after each agent's action-value refresh.
VPGResult solve_zero_sum(const GameSpec& game, const VPGConfig& config);

}  // namespace vsg

#endif  // VSG_EQUILIBRIA_EXT_H_
