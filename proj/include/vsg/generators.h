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

#ifndef VSG_GENERATORS_H_
#define VSG_GENERATORS_H_

#include <cstdint>

#include "vsg/game.h"

namespace vsg {

// Canonical one-shot games lifted to single-state stochastic games.
GameSpec matching_pennies(double gamma = 0.9);
GameSpec rock_paper_scissors(double gamma = 0.9);
// Payoffs T=5, R=3, P=1, S=0; action 0 = Cooperate, action 1 = Defect.
GameSpec prisoners_dilemma(double gamma = 0.9);
GameSpec game_of_chicken(double gamma = 0.9);

// Two-agent coordination game on a shared 1-D action grid of `grid` evenly
// spaced points on [-10, 10]. Both agents receive max(f1, f2) with
//   f1 = 0.8 * (-((a1+5)/3)^2 - ((a2+5)/3)^2)
//   f2 = 1.0 * (-((a1-5)/1)^2 - ((a2-5)/1)^2) + 10,
// a narrow global peak of 10 at (5, 5) next to a wide flat shoulder at
// (-5, -5). The default 41-point grid has step 0.5 so that 5.0 is a grid
// point. Requires grid >= 3.
GameSpec make_differential_game(int grid = 41, double gamma = 0.9);
double differential_reward(double a1, double a2);
double differential_grid_point(int grid, int index);

// Identical-interest game with i.i.d. uniform rewards on [-1, 1] and
// normalized i.i.d. uniform transition rows. Uniform initial distribution.
// Deterministic for a given seed. Identical-interest games admit the common
// value as an exact potential.
GameSpec make_random_identical_interest_mpg(std::uint64_t seed, int n_agents,
                                            int n_states, int n_actions,
                                            double gamma = 0.9);

// Same construction with independent rewards per agent (general sum).
GameSpec make_random_general_sum(std::uint64_t seed, int n_agents,
                                 int n_states, int n_actions,
                                 double gamma = 0.9);

// Rescales rewards affinely into [-1, 1] and returns the scale that was
// applied (max |r| before scaling; 1.0 if already within bounds).
double normalize_rewards(GameSpec& game);

// One-agent two-state chain used by transform and evaluation tests.
GameSpec two_state_chain(double gamma, double p_stay = 0.7);

}  // namespace vsg

#endif  // VSG_GENERATORS_H_
