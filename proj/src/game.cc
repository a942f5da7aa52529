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

#include "vsg/game.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vsg/check.h"

namespace vsg {

namespace {
constexpr double kRowSumTol = 1e-12;
}

std::string to_string(GameKind kind) {
  switch (kind) {
    case GameKind::kGeneralSum:
      return "general_sum";
    case GameKind::kIdenticalInterest:
      return "identical_interest";
    case GameKind::kZeroSumTwoPlayer:
      return "zero_sum";
  }
  return "general_sum";
}

GameKind game_kind_from_string(const std::string& s) {
  if (s == "identical_interest") return GameKind::kIdenticalInterest;
  if (s == "zero_sum") return GameKind::kZeroSumTwoPlayer;
  if (s == "general_sum") return GameKind::kGeneralSum;
  throw ParameterError("unknown game kind: " + s);
}

void GameSpec::allocate() {
  joints = JointActionSpace(n_actions);
  reward.assign(static_cast<size_t>(n_agents) * n_states * joints.size(), 0.0);
  transition.assign(static_cast<size_t>(n_states) * joints.size() * n_states,
                    0.0);
  initial.assign(n_states, 0.0);
}

std::vector<std::string> validate(const GameSpec& game) {
  std::vector<std::string> violations;
  auto add = [&](const std::string& v) { violations.push_back(v); };

  if (game.n_agents < 1) add("n_agents must be >= 1");
  if (game.n_states < 1) add("states must be >= 1");
  if (static_cast<int>(game.n_actions.size()) != game.n_agents)
    add("actions: expected one entry per agent");
  for (size_t i = 0; i < game.n_actions.size(); ++i) {
    if (game.n_actions[i] < 1)
      add("actions[" + std::to_string(i) + "]: must be >= 1");
  }
  if (!violations.empty()) return violations;

  int a_total = game.joints.size();
  if (game.joints.n_agents() != game.n_agents ||
      game.joints.sizes() != game.n_actions)
    add("joint action space inconsistent with actions");
  if (game.reward.size() !=
      static_cast<size_t>(game.n_agents) * game.n_states * a_total)
    add("reward: wrong tensor size");
  if (game.transition.size() !=
      static_cast<size_t>(game.n_states) * a_total * game.n_states)
    add("transition: wrong tensor size");
  if (static_cast<int>(game.initial.size()) != game.n_states)
    add("initial: wrong length");
  if (game.gamma < 0.0 || game.gamma >= 1.0)
    add("gamma: must lie in [0, 1)");
  if (game.horizon.is_finite && game.horizon.steps < 1)
    add("horizon: finite horizon must be >= 1");
  if (!violations.empty()) return violations;

  for (int s = 0; s < game.n_states; ++s) {
    for (int a = 0; a < a_total; ++a) {
      double row_sum = 0.0;
      auto row = game.transition_row(s, a);
      for (int s2 = 0; s2 < game.n_states; ++s2) {
        if (row[s2] < 0.0)
          add("transition[s=" + std::to_string(s) + ",a=" + std::to_string(a) +
              ",s'=" + std::to_string(s2) + "]: negative probability");
        row_sum += row[s2];
      }
      if (std::abs(row_sum - 1.0) > kRowSumTol)
        add("transition[s=" + std::to_string(s) + ",a=" + std::to_string(a) +
            "]: row sums to " + std::to_string(row_sum));
    }
  }
  double init_sum = 0.0;
  for (int s = 0; s < game.n_states; ++s) {
    if (game.initial[s] < 0.0)
      add("initial[s=" + std::to_string(s) + "]: negative probability");
    init_sum += game.initial[s];
  }
  if (std::abs(init_sum - 1.0) > kRowSumTol)
    add("initial: sums to " + std::to_string(init_sum));
  for (double r : game.reward) {
    if (!std::isfinite(r)) {
      add("reward: non-finite entry");
      break;
    }
  }
  return violations;
}

std::vector<std::string> verify_kind(const GameSpec& game) {
  std::vector<std::string> violations;
  const int a_total = game.joints.size();
  switch (game.kind) {
    case GameKind::kGeneralSum:
      break;
    case GameKind::kIdenticalInterest:
      for (int i = 1; i < game.n_agents; ++i) {
        for (int s = 0; s < game.n_states; ++s) {
          for (int a = 0; a < a_total; ++a) {
            if (game.r(i, s, a) != game.r(0, s, a)) {
              violations.push_back("identical_interest violated at agent " +
                                   std::to_string(i) + ", s=" +
                                   std::to_string(s) + ", a=" +
                                   std::to_string(a));
              return violations;
            }
          }
        }
      }
      break;
    case GameKind::kZeroSumTwoPlayer:
      if (game.n_agents != 2) {
        violations.push_back("zero_sum requires exactly two agents");
        return violations;
      }
      for (int s = 0; s < game.n_states; ++s) {
        for (int a = 0; a < a_total; ++a) {
          if (game.r(0, s, a) != -game.r(1, s, a)) {
            violations.push_back("zero_sum violated at s=" +
                                 std::to_string(s) + ", a=" +
                                 std::to_string(a));
            return violations;
          }
        }
      }
      break;
  }
  return violations;
}

GameSpec absorbing_transform(const GameSpec& game, double gamma) {
  VSG_CHECK(!game.horizon.is_finite,
            "absorbing_transform: game must be infinite-discounted");
  VSG_CHECK(gamma > 0.0 && gamma < 1.0,
            "absorbing_transform: gamma must lie in (0, 1)");

  GameSpec out;
  out.n_agents = game.n_agents;
  out.n_states = game.n_states + 1;
  out.n_actions = game.n_actions;
  out.allocate();
  out.gamma = 0.0;  // returns in the output are undiscounted
  out.horizon = Horizon::infinite();
  out.kind = game.kind;
  out.pre_discounted = true;
  out.absorbing_state = game.n_states;

  const int a_total = game.joints.size();
  const int sink = out.absorbing_state;
  for (int s = 0; s < game.n_states; ++s) {
    for (int a = 0; a < a_total; ++a) {
      auto src = game.transition_row(s, a);
      auto dst = out.transition_row(s, a);
      for (int s2 = 0; s2 < game.n_states; ++s2) dst[s2] = gamma * src[s2];
      dst[sink] = 1.0 - gamma;
      for (int i = 0; i < game.n_agents; ++i)
        out.r(i, s, a) = game.r(i, s, a);
    }
  }
  for (int a = 0; a < a_total; ++a) {
    out.transition_row(sink, a)[sink] = 1.0;
    // absorbing rewards stay zero
  }
  for (int s = 0; s < game.n_states; ++s) out.initial[s] = game.initial[s];
  return out;
}

GameSpec make_matrix_game(const std::vector<std::vector<double>>& payoffs,
                          const std::vector<int>& n_actions, double gamma,
                          Horizon horizon) {
  VSG_CHECK(!payoffs.empty(), "make_matrix_game: no payoff matrices");
  GameSpec game;
  game.n_agents = static_cast<int>(payoffs.size());
  game.n_states = 1;
  game.n_actions = n_actions;
  game.allocate();
  game.gamma = gamma;
  game.horizon = horizon;
  game.initial[0] = 1.0;

  const int a_total = game.joints.size();
  for (int i = 0; i < game.n_agents; ++i) {
    VSG_CHECK(static_cast<int>(payoffs[i].size()) == a_total,
              "make_matrix_game: payoff matrix size mismatch for agent " +
                  std::to_string(i));
    for (int a = 0; a < a_total; ++a) game.r(i, 0, a) = payoffs[i][a];
  }
  for (int a = 0; a < a_total; ++a) game.transition_row(0, a)[0] = 1.0;

  // Detect special structure so downstream kind checks are meaningful.
  game.kind = GameKind::kGeneralSum;
  bool identical = true;
  for (int i = 1; i < game.n_agents && identical; ++i)
    identical = payoffs[i] == payoffs[0];
  if (identical) {
    game.kind = GameKind::kIdenticalInterest;
  } else if (game.n_agents == 2) {
    bool zero_sum = true;
    for (int a = 0; a < a_total && zero_sum; ++a)
      zero_sum = payoffs[0][a] == -payoffs[1][a];
    if (zero_sum) game.kind = GameKind::kZeroSumTwoPlayer;
  }
  return game;
}

std::string to_json(const GameSpec& game) {
  nlohmann::ordered_json j;
  j["_joint_order"] = "row-major, agent 0 outermost";
  j["n_agents"] = game.n_agents;
  j["states"] = game.n_states;
  j["actions"] = game.n_actions;
  j["gamma"] = game.gamma;
  if (game.horizon.is_finite) {
    j["horizon"] = game.horizon.steps;
  } else {
    j["horizon"] = "inf";
  }
  j["initial"] = game.initial;
  j["kind"] = to_string(game.kind);

  const int a_total = game.joints.size();
  nlohmann::ordered_json reward = nlohmann::ordered_json::array();
  for (int i = 0; i < game.n_agents; ++i) {
    nlohmann::ordered_json per_state = nlohmann::ordered_json::array();
    for (int s = 0; s < game.n_states; ++s) {
      std::vector<double> row(a_total);
      for (int a = 0; a < a_total; ++a) row[a] = game.r(i, s, a);
      per_state.push_back(row);
    }
    reward.push_back(per_state);
  }
  j["reward"] = reward;

  nlohmann::ordered_json transition = nlohmann::ordered_json::array();
  for (int s = 0; s < game.n_states; ++s) {
    nlohmann::ordered_json per_action = nlohmann::ordered_json::array();
    for (int a = 0; a < a_total; ++a) {
      auto row = game.transition_row(s, a);
      per_action.push_back(std::vector<double>(row.begin(), row.end()));
    }
    transition.push_back(per_action);
  }
  j["transition"] = transition;
  return j.dump(2);
}

GameSpec game_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("game file: invalid JSON: ") + e.what());
  }
  GameSpec game;
  try {
    game.n_agents = j.at("n_agents").get<int>();
    game.n_states = j.at("states").get<int>();
    game.n_actions = j.at("actions").get<std::vector<int>>();
    game.allocate();
    game.gamma = j.at("gamma").get<double>();
    const auto& h = j.at("horizon");
    if (h.is_string()) {
      VSG_CHECK(h.get<std::string>() == "inf",
                "game file: horizon must be an int or \"inf\"");
      game.horizon = Horizon::infinite();
    } else {
      game.horizon = Horizon::finite(h.get<int>());
    }
    game.initial = j.at("initial").get<std::vector<double>>();
    if (j.contains("kind"))
      game.kind = game_kind_from_string(j.at("kind").get<std::string>());

    const int a_total = game.joints.size();
    const auto& reward = j.at("reward");
    VSG_CHECK(static_cast<int>(reward.size()) == game.n_agents,
              "game file: reward has wrong agent count");
    for (int i = 0; i < game.n_agents; ++i) {
      VSG_CHECK(static_cast<int>(reward[i].size()) == game.n_states,
                "game file: reward has wrong state count");
      for (int s = 0; s < game.n_states; ++s) {
        VSG_CHECK(static_cast<int>(reward[i][s].size()) == a_total,
                  "game file: reward has wrong joint-action count");
        for (int a = 0; a < a_total; ++a)
          game.r(i, s, a) = reward[i][s][a].get<double>();
      }
    }
    const auto& transition = j.at("transition");
    VSG_CHECK(static_cast<int>(transition.size()) == game.n_states,
              "game file: transition has wrong state count");
    for (int s = 0; s < game.n_states; ++s) {
      VSG_CHECK(static_cast<int>(transition[s].size()) == a_total,
                "game file: transition has wrong joint-action count");
      for (int a = 0; a < a_total; ++a) {
        VSG_CHECK(static_cast<int>(transition[s][a].size()) == game.n_states,
                  "game file: transition row has wrong length");
        auto row = game.transition_row(s, a);
        for (int s2 = 0; s2 < game.n_states; ++s2)
          row[s2] = transition[s][a][s2].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("game file: ") + e.what());
  }
  return game;
}

GameSpec load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return game_from_json(buf.str());
}

void save_game(const GameSpec& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write game file: " + path);
  out << to_json(game) << "\n";
}

}  // namespace vsg
