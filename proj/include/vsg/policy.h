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

#ifndef VSG_POLICY_H_
#define VSG_POLICY_H_

#include <span>
#include <vector>

#include "vsg/game.h"

namespace vsg {

// A state-conditioned action distribution, pi(a | s). Also serves as a
// marginal policy, a prior policy, and an opponent-model row.
struct StatePolicy {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> p;  // [s * n_actions + a]

  StatePolicy() = default;
  StatePolicy(int states, int actions)
      : n_states(states), n_actions(actions),
        p(static_cast<size_t>(states) * actions, 0.0) {}
  static StatePolicy uniform(int states, int actions);

  std::span<double> row(int s) {
    return {p.data() + static_cast<size_t>(s) * n_actions,
            static_cast<size_t>(n_actions)};
  }
  std::span<const double> row(int s) const {
    return {p.data() + static_cast<size_t>(s) * n_actions,
            static_cast<size_t>(n_actions)};
  }
  double at(int s, int a) const {
    return p[static_cast<size_t>(s) * n_actions + a];
  }
  double& at(int s, int a) {
    return p[static_cast<size_t>(s) * n_actions + a];
  }
  double max_row_tv(const StatePolicy& other) const;
};

using PriorPolicy = StatePolicy;

// Policy of one agent conditioned on state and the opponents' joint action:
// pi_i(a^i | s, a^{-i}). Rows over a^i are distributions for every (s, a^{-i}).
class ConditionedPolicy {
 public:
  ConditionedPolicy() = default;
  ConditionedPolicy(int agent, int n_states, int n_opponent, int n_own);
  static ConditionedPolicy uniform(const GameSpec& game, int agent);

  int agent() const { return agent_; }
  int n_states() const { return n_states_; }
  int n_opponent() const { return n_opp_; }
  int n_own() const { return n_own_; }

  std::span<double> row(int s, int opp) {
    return {p_.data() + offset(s, opp), static_cast<size_t>(n_own_)};
  }
  std::span<const double> row(int s, int opp) const {
    return {p_.data() + offset(s, opp), static_cast<size_t>(n_own_)};
  }
  double at(int s, int opp, int a) const { return p_[offset(s, opp) + a]; }
  double& at(int s, int opp, int a) { return p_[offset(s, opp) + a]; }

  // Sup over (s, a^{-i}) rows of the TV distance to `other`.
  double max_row_tv(const ConditionedPolicy& other) const;

  // True iff every row is a strictly positive distribution within tol.
  bool is_valid(double tol = 1e-10) const;

 private:
  size_t offset(int s, int opp) const {
    return (static_cast<size_t>(s) * n_opp_ + opp) * n_own_;
  }
  int agent_ = 0, n_states_ = 0, n_opp_ = 0, n_own_ = 0;
  std::vector<double> p_;
};

// Agent i's model of the other agents: one state-conditioned distribution
// rho_j(a^j | s) per modelee j != i, joint model the product over modelees.
class OpponentModel {
 public:
  OpponentModel() = default;
  OpponentModel(int modeler, int n_states, const std::vector<int>& all_sizes);
  static OpponentModel uniform(const GameSpec& game, int modeler);

  int modeler() const { return modeler_; }
  const std::vector<int>& modelees() const { return modelees_; }
  int n_states() const { return n_states_; }

  // Row of modelee `j` (an agent id, not a position) at state s.
  std::span<double> row(int j, int s);
  std::span<const double> row(int j, int s) const;
  const StatePolicy& modelee_policy(int j) const;
  // Overwrites modelee j's rows, flooring entries at kProbFloor.
  void set_modelee_policy(int j, const StatePolicy& policy);

  // rho(a^{-i} | s) for one opponent joint index.
  double joint_prob(const JointActionSpace& joints, int s, int opp) const;
  // Full row over opponent joint indices; length joints.opponent_size(i).
  std::vector<double> joint_row(const JointActionSpace& joints, int s) const;

 private:
  int position(int j) const;
  int modeler_ = 0;
  int n_states_ = 0;
  std::vector<int> modelees_;       // agent ids, increasing
  std::vector<StatePolicy> rho_;    // by position
};

}  // namespace vsg

#endif  // VSG_POLICY_H_
