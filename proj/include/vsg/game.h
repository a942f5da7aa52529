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

#ifndef VSG_GAME_H_
#define VSG_GAME_H_

#include <span>
#include <string>
#include <vector>

#include "vsg/joint_actions.h"

namespace vsg {

enum class GameKind { kGeneralSum, kIdenticalInterest, kZeroSumTwoPlayer };

std::string to_string(GameKind kind);
GameKind game_kind_from_string(const std::string& s);

// Either a fixed number of decision epochs t = 0..T-1 (evaluated
// undiscounted) or an infinite discounted horizon.
struct Horizon {
  bool is_finite = false;
  int steps = 0;  // only meaningful when is_finite

  static Horizon infinite() { return Horizon{false, 0}; }
  static Horizon finite(int t) { return Horizon{true, t}; }
};

// A finite general-sum stochastic game. Immutable after construction by
// convention; solvers share const references across runs.
struct GameSpec {
  int n_agents = 0;
  int n_states = 0;
  std::vector<int> n_actions;  // per agent
  JointActionSpace joints;     // derived from n_actions

  // reward[(agent * n_states + s) * joints.size() + joint]
  std::vector<double> reward;
  // transition[(s * joints.size() + joint) * n_states + s2]
  std::vector<double> transition;

  double gamma = 0.0;
  Horizon horizon = Horizon::infinite();
  std::vector<double> initial;  // distribution over states
  GameKind kind = GameKind::kGeneralSum;

  // When absorbing_transform has been applied: the transformed kernel is
  // pre-discounted and index of the absorbing state is recorded.
  bool pre_discounted = false;
  int absorbing_state = -1;

  double r(int agent, int s, int joint) const {
    return reward[(static_cast<size_t>(agent) * n_states + s) * joints.size() +
                  joint];
  }
  double& r(int agent, int s, int joint) {
    return reward[(static_cast<size_t>(agent) * n_states + s) * joints.size() +
                  joint];
  }
  std::span<const double> transition_row(int s, int joint) const {
    return {transition.data() +
                (static_cast<size_t>(s) * joints.size() + joint) * n_states,
            static_cast<size_t>(n_states)};
  }
  std::span<double> transition_row(int s, int joint) {
    return {transition.data() +
                (static_cast<size_t>(s) * joints.size() + joint) * n_states,
            static_cast<size_t>(n_states)};
  }
  double p(int s, int joint, int s2) const {
    return transition_row(s, joint)[s2];
  }

  // Allocates zeroed tensors once the dimensions are set.
  void allocate();
};

// Returns an empty list iff the game satisfies all structural invariants
// (row-stochastic transitions, normalized initial distribution, tensor
// shapes). Each violation names the offending tensor and index.
std::vector<std::string> validate(const GameSpec& game);

// Checks the declared kind against the reward tensors (exact equality).
std::vector<std::string> verify_kind(const GameSpec& game);

// Folds the discount into the kernel: every transition is scaled by gamma
// and the leftover mass 1-gamma goes to a fresh absorbing state with zero
// reward. The result is flagged pre-discounted (gamma field set to 1).
GameSpec absorbing_transform(const GameSpec& game, double gamma);

// Lifts one-shot per-agent payoff matrices into a single-state game with a
// self-loop transition. payoffs[i] has joint-action length, flattened in the
// same row-major order as JointActionSpace.
GameSpec make_matrix_game(const std::vector<std::vector<double>>& payoffs,
                          const std::vector<int>& n_actions, double gamma,
                          Horizon horizon = Horizon::infinite());

// JSON (de)serialization of the documented game file format.
std::string to_json(const GameSpec& game);
GameSpec game_from_json(const std::string& text);
GameSpec load_game(const std::string& path);
void save_game(const GameSpec& game, const std::string& path);

}  // namespace vsg

#endif  // VSG_GAME_H_
