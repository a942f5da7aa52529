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

#include "vsg/policy.h"

#include <algorithm>
#include <cmath>

#include "vsg/check.h"
#include "vsg/distributions.h"

namespace vsg {

StatePolicy StatePolicy::uniform(int states, int actions) {
  StatePolicy out(states, actions);
  std::fill(out.p.begin(), out.p.end(), 1.0 / actions);
  return out;
}

double StatePolicy::max_row_tv(const StatePolicy& other) const {
  double m = 0.0;
  for (int s = 0; s < n_states; ++s) m = std::max(m, tv(row(s), other.row(s)));
  return m;
}

ConditionedPolicy::ConditionedPolicy(int agent, int n_states, int n_opponent,
                                     int n_own)
    : agent_(agent), n_states_(n_states), n_opp_(n_opponent), n_own_(n_own),
      p_(static_cast<size_t>(n_states) * n_opponent * n_own, 0.0) {}

ConditionedPolicy ConditionedPolicy::uniform(const GameSpec& game, int agent) {
  ConditionedPolicy out(agent, game.n_states,
                        game.joints.opponent_size(agent),
                        game.n_actions[agent]);
  std::fill(out.p_.begin(), out.p_.end(), 1.0 / game.n_actions[agent]);
  return out;
}

double ConditionedPolicy::max_row_tv(const ConditionedPolicy& other) const {
  double m = 0.0;
  for (int s = 0; s < n_states_; ++s) {
    for (int c = 0; c < n_opp_; ++c) m = std::max(m, tv(row(s, c), other.row(s, c)));
  }
  return m;
}

bool ConditionedPolicy::is_valid(double tol) const {
  for (int s = 0; s < n_states_; ++s) {
    for (int c = 0; c < n_opp_; ++c) {
      auto r = row(s, c);
      double sum = 0.0;
      for (double x : r) {
        if (!(x > 0.0)) return false;
        sum += x;
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
  }
  return true;
}

OpponentModel::OpponentModel(int modeler, int n_states,
                             const std::vector<int>& all_sizes)
    : modeler_(modeler), n_states_(n_states) {
  for (int j = 0; j < static_cast<int>(all_sizes.size()); ++j) {
    if (j == modeler) continue;
    modelees_.push_back(j);
    rho_.push_back(StatePolicy::uniform(n_states, all_sizes[j]));
  }
}

OpponentModel OpponentModel::uniform(const GameSpec& game, int modeler) {
  return OpponentModel(modeler, game.n_states, game.n_actions);
}

int OpponentModel::position(int j) const {
  for (int k = 0; k < static_cast<int>(modelees_.size()); ++k) {
    if (modelees_[k] == j) return k;
  }
  throw ParameterError("OpponentModel: agent " + std::to_string(j) +
                       " is not a modelee of agent " +
                       std::to_string(modeler_));
}

std::span<double> OpponentModel::row(int j, int s) {
  return rho_[position(j)].row(s);
}

std::span<const double> OpponentModel::row(int j, int s) const {
  return rho_[position(j)].row(s);
}

const StatePolicy& OpponentModel::modelee_policy(int j) const {
  return rho_[position(j)];
}

void OpponentModel::set_modelee_policy(int j, const StatePolicy& policy) {
  StatePolicy& dst = rho_[position(j)];
  VSG_CHECK(policy.n_states == dst.n_states &&
                policy.n_actions == dst.n_actions,
            "OpponentModel: modelee policy has wrong shape");
  dst = policy;
  for (int s = 0; s < dst.n_states; ++s) floor_and_normalize(dst.row(s));
}

double OpponentModel::joint_prob(const JointActionSpace& joints, int s,
                                 int opp) const {
  std::vector<int> actions = joints.decode_opponent(modeler_, opp);
  double p = 1.0;
  for (size_t k = 0; k < actions.size(); ++k) p *= rho_[k].at(s, actions[k]);
  return p;
}

std::vector<double> OpponentModel::joint_row(const JointActionSpace& joints,
                                             int s) const {
  const int n_opp = joints.opponent_size(modeler_);
  std::vector<double> out(n_opp);
  for (int c = 0; c < n_opp; ++c) out[c] = joint_prob(joints, s, c);
  return out;
}

}  // namespace vsg
