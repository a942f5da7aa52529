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

#include "vsg/generators.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "vsg/check.h"

namespace vsg {

GameSpec matching_pennies(double gamma) {
  // Row player wins on a match.
  std::vector<double> r1 = {1, -1, -1, 1};
  std::vector<double> r2 = {-1, 1, 1, -1};
  return make_matrix_game({r1, r2}, {2, 2}, gamma);
}

GameSpec rock_paper_scissors(double gamma) {
  std::vector<double> r1 = {0, -1, 1, 1, 0, -1, -1, 1, 0};
  std::vector<double> r2(9);
  for (int a = 0; a < 9; ++a) r2[a] = -r1[a];
  return make_matrix_game({r1, r2}, {3, 3}, gamma);
}

GameSpec prisoners_dilemma(double gamma) {
  // (C,C)=R, (C,D)=S, (D,C)=T, (D,D)=P with T=5, R=3, P=1, S=0.
  std::vector<double> r1 = {3, 0, 5, 1};
  std::vector<double> r2 = {3, 5, 0, 1};
  return make_matrix_game({r1, r2}, {2, 2}, gamma);
}

GameSpec game_of_chicken(double gamma) {
  // Action 0 = Dare, action 1 = Chicken.
  std::vector<double> r1 = {0, 7, 2, 6};
  std::vector<double> r2 = {0, 2, 7, 6};
  return make_matrix_game({r1, r2}, {2, 2}, gamma);
}

double differential_reward(double a1, double a2) {
  double f1 = 0.8 * (-std::pow((a1 + 5.0) / 3.0, 2.0) -
                     std::pow((a2 + 5.0) / 3.0, 2.0));
  double f2 = 1.0 * (-std::pow((a1 - 5.0) / 1.0, 2.0) -
                     std::pow((a2 - 5.0) / 1.0, 2.0)) +
              10.0;
  return std::max(f1, f2);
}

double differential_grid_point(int grid, int index) {
  return -10.0 + 20.0 * index / (grid - 1);
}

GameSpec make_differential_game(int grid, double gamma) {
  VSG_CHECK(grid >= 3, "make_differential_game: grid must be >= 3");
  GameSpec game;
  game.n_agents = 2;
  game.n_states = 1;
  game.n_actions = {grid, grid};
  game.allocate();
  game.gamma = gamma;
  game.horizon = Horizon::infinite();
  game.initial[0] = 1.0;
  game.kind = GameKind::kIdenticalInterest;

  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      double v = differential_reward(differential_grid_point(grid, i),
                                     differential_grid_point(grid, j));
      int joint = game.joints.encode({i, j});
      game.r(0, 0, joint) = v;
      game.r(1, 0, joint) = v;
    }
  }
  for (int a = 0; a < game.joints.size(); ++a)
    game.transition_row(0, a)[0] = 1.0;
  return game;
}

namespace {

GameSpec random_game_impl(std::uint64_t seed, int n_agents, int n_states,
                          int n_actions, double gamma, bool identical) {
  VSG_CHECK(n_agents >= 1 && n_states >= 1 && n_actions >= 1,
            "random game: sizes must be >= 1");
  GameSpec game;
  game.n_agents = n_agents;
  game.n_states = n_states;
  game.n_actions.assign(n_agents, n_actions);
  game.allocate();
  game.gamma = gamma;
  game.horizon = Horizon::infinite();
  game.kind =
      identical ? GameKind::kIdenticalInterest : GameKind::kGeneralSum;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> reward_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int a_total = game.joints.size();
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < a_total; ++a) {
      if (identical) {
        double v = reward_dist(rng);
        for (int i = 0; i < n_agents; ++i) game.r(i, s, a) = v;
      } else {
        for (int i = 0; i < n_agents; ++i) game.r(i, s, a) = reward_dist(rng);
      }
    }
  }
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < a_total; ++a) {
      auto row = game.transition_row(s, a);
      double sum = 0.0;
      for (int s2 = 0; s2 < n_states; ++s2) {
        row[s2] = unit(rng);
        sum += row[s2];
      }
      for (int s2 = 0; s2 < n_states; ++s2) row[s2] /= sum;
      // Force the row to sum to exactly 1 in floating point.
      double acc = 0.0;
      for (int s2 = 0; s2 + 1 < n_states; ++s2) acc += row[s2];
      row[n_states - 1] = 1.0 - acc;
    }
  }
  for (int s = 0; s < n_states; ++s)
    game.initial[s] = 1.0 / n_states;
  double acc = 0.0;
  for (int s = 0; s + 1 < n_states; ++s) acc += game.initial[s];
  game.initial[n_states - 1] = 1.0 - acc;
  return game;
}

}  // namespace

GameSpec make_random_identical_interest_mpg(std::uint64_t seed, int n_agents,
                                            int n_states, int n_actions,
                                            double gamma) {
  return random_game_impl(seed, n_agents, n_states, n_actions, gamma, true);
}

GameSpec make_random_general_sum(std::uint64_t seed, int n_agents,
                                 int n_states, int n_actions, double gamma) {
  return random_game_impl(seed, n_agents, n_states, n_actions, gamma, false);
}

double normalize_rewards(GameSpec& game) {
  double max_abs = 0.0;
  for (double r : game.reward) max_abs = std::max(max_abs, std::abs(r));
  if (max_abs <= 1.0 || max_abs == 0.0) return 1.0;
  for (double& r : game.reward) r /= max_abs;
  return max_abs;
}

GameSpec two_state_chain(double gamma, double p_stay) {
  GameSpec game;
  game.n_agents = 1;
  game.n_states = 2;
  game.n_actions = {1};
  game.allocate();
  game.gamma = gamma;
  game.horizon = Horizon::infinite();
  game.initial = {1.0, 0.0};
  game.r(0, 0, 0) = 1.0;
  game.r(0, 1, 0) = -0.5;
  game.transition_row(0, 0)[0] = p_stay;
  game.transition_row(0, 0)[1] = 1.0 - p_stay;
  game.transition_row(1, 0)[0] = 1.0 - p_stay;
  game.transition_row(1, 0)[1] = p_stay;
  return game;
}

}  // namespace vsg
