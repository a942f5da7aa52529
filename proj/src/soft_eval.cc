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

#include "vsg/soft_eval.h"

#include <algorithm>
#include <cmath>

#include "vsg/check.h"
#include "vsg/distributions.h"

namespace vsg {

namespace {

// Per-state cached terms that do not change between sweeps.
struct StateContext {
  std::vector<double> rho_joint;    // rho(a^{-i} | s) over opponent indices
  std::vector<double> log_rho;      // floored logs of the above
  std::vector<double> log_pi_mi;    // log pi_{-i}(a^{-i} | s) (mode-dependent)
};

std::vector<StateContext> build_contexts(
    const GameSpec& game, int agent, const OpponentModel& rho, EvalMode mode,
    const std::vector<StatePolicy>* true_marginals) {
  const int n_opp = game.joints.opponent_size(agent);
  std::vector<StateContext> ctx(game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    StateContext& c = ctx[s];
    c.rho_joint = rho.joint_row(game.joints, s);
    c.log_rho.resize(n_opp);
    c.log_pi_mi.resize(n_opp);
    for (int o = 0; o < n_opp; ++o) {
      c.log_rho[o] = std::log(std::max(c.rho_joint[o], kProbFloor));
      if (mode == EvalMode::kModeledOpponent) {
        c.log_pi_mi[o] = c.log_rho[o];
      } else {
        double lp = 0.0;
        std::vector<int> actions = game.joints.decode_opponent(agent, o);
        int k = 0;
        for (int j = 0; j < game.n_agents; ++j) {
          if (j == agent) continue;
          lp += std::log(
              std::max((*true_marginals)[j].at(s, actions[k]), kProbFloor));
          ++k;
        }
        c.log_pi_mi[o] = lp;
      }
    }
  }
  return ctx;
}

// One synchronous backup. Writes Q for every (s, joint) and returns the new
// state values. `v_next` is the continuation value (V_{t+1} or the previous
// sweep). The absorbing state of a pre-discounted game is pinned at zero.
void backup(const GameSpec& game, int agent, const ConditionedPolicy& pi,
            const std::vector<StateContext>& ctx,
            const std::vector<int>& compose, double disc,
            const std::vector<double>& v_next, std::vector<double>* q_out,
            std::vector<double>* v_out) {
  const int n_opp = game.joints.opponent_size(agent);
  const int n_own = game.n_actions[agent];
  const int n_joint = game.joints.size();
  for (int s = 0; s < game.n_states; ++s) {
    if (game.pre_discounted && s == game.absorbing_state) {
      for (int j = 0; j < n_joint; ++j)
        (*q_out)[static_cast<size_t>(s) * n_joint + j] = 0.0;
      (*v_out)[s] = 0.0;
      continue;
    }
    const StateContext& c = ctx[s];
    double v_acc = 0.0;
    for (int o = 0; o < n_opp; ++o) {
      const double w_opp = c.rho_joint[o];
      auto pi_row = pi.row(s, o);
      double inner = 0.0;
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        double cont = 0.0;
        auto trans = game.transition_row(s, joint);
        for (int s2 = 0; s2 < game.n_states; ++s2)
          cont += trans[s2] * v_next[s2];
        const double q =
            game.r(agent, s, joint) + c.log_pi_mi[o] + disc * cont;
        (*q_out)[static_cast<size_t>(s) * n_joint + joint] = q;
        const double p = pi_row[a];
        if (p > 0.0) inner += p * (q - std::log(p) - c.log_rho[o]);
      }
      if (w_opp > 0.0) v_acc += w_opp * inner;
    }
    (*v_out)[s] = v_acc;
  }
}

void check_mode_args(EvalMode mode,
                     const std::vector<StatePolicy>* true_marginals) {
  if (mode == EvalMode::kModeledOpponent && true_marginals != nullptr) {
    throw ParameterError(
        "soft_policy_evaluation: true opponents supplied in "
        "ModeledOpponent mode");
  }
  if (mode == EvalMode::kOracleOpponent && true_marginals == nullptr) {
    throw ParameterError(
        "soft_policy_evaluation: OracleOpponent mode needs the true "
        "opponent marginals");
  }
}

}  // namespace

SoftQTable soft_policy_evaluation(const GameSpec& game, int agent,
                                  const ConditionedPolicy& pi,
                                  const OpponentModel& rho, EvalMode mode,
                                  const std::vector<StatePolicy>* true_marginals,
                                  double tol, long max_iters) {
  check_mode_args(mode, true_marginals);
  VSG_CHECK(tol > 0.0, "soft_policy_evaluation: tol must be positive");

  if (game.horizon.is_finite) {
    if (true_marginals == nullptr) {
      return soft_policy_evaluation_finite(game, agent, {pi}, {rho}, mode,
                                           nullptr);
    }
    std::vector<std::vector<StatePolicy>> marg_t(1, *true_marginals);
    return soft_policy_evaluation_finite(game, agent, {pi}, {rho}, mode,
                                         &marg_t);
  }

  const double disc = game.pre_discounted ? 1.0 : game.gamma;
  if (!game.pre_discounted && game.gamma >= 1.0) {
    throw ParameterError(
        "soft_policy_evaluation: gamma >= 1 without absorbing transform is "
        "non-contractive");
  }

  auto ctx = build_contexts(game, agent, rho, mode, true_marginals);
  auto compose = game.joints.compose_table(agent);

  SoftQTable out;
  out.agent = agent;
  out.mode = mode;
  out.q.assign(1, std::vector<double>(
                      static_cast<size_t>(game.n_states) * game.joints.size(),
                      0.0));
  out.v.assign(1, std::vector<double>(game.n_states, 0.0));

  std::vector<double> v_prev(game.n_states, 0.0);
  double residual = 0.0;
  for (long it = 0; it < max_iters; ++it) {
    backup(game, agent, pi, ctx, compose, disc, v_prev, &out.q[0], &out.v[0]);
    residual = 0.0;
    for (int s = 0; s < game.n_states; ++s)
      residual = std::max(residual, std::abs(out.v[0][s] - v_prev[s]));
    v_prev = out.v[0];
    if (residual < tol) {
      // One more backup so Q is consistent with the final V.
      backup(game, agent, pi, ctx, compose, disc, v_prev, &out.q[0],
             &out.v[0]);
      return out;
    }
  }
  throw ConvergenceError(
      "soft_policy_evaluation: iteration cap hit before reaching tolerance",
      residual);
}

SoftQTable soft_policy_evaluation_finite(
    const GameSpec& game, int agent,
    const std::vector<ConditionedPolicy>& pi_t,
    const std::vector<OpponentModel>& rho_t, EvalMode mode,
    const std::vector<std::vector<StatePolicy>>* true_marginals_t) {
  VSG_CHECK(game.horizon.is_finite,
            "soft_policy_evaluation_finite: game must have a finite horizon");
  if (mode == EvalMode::kModeledOpponent && true_marginals_t != nullptr)
    throw ParameterError(
        "soft_policy_evaluation_finite: true opponents supplied in "
        "ModeledOpponent mode");
  if (mode == EvalMode::kOracleOpponent && true_marginals_t == nullptr)
    throw ParameterError(
        "soft_policy_evaluation_finite: OracleOpponent mode needs the true "
        "opponent marginals");
  const int horizon = game.horizon.steps;
  VSG_CHECK(!pi_t.empty() && !rho_t.empty(),
            "soft_policy_evaluation_finite: empty policy sequence");
  VSG_CHECK(static_cast<int>(pi_t.size()) == horizon || pi_t.size() == 1,
            "soft_policy_evaluation_finite: policy count must be T or 1");
  VSG_CHECK(static_cast<int>(rho_t.size()) == horizon || rho_t.size() == 1,
            "soft_policy_evaluation_finite: model count must be T or 1");

  auto pi_at = [&](int t) -> const ConditionedPolicy& {
    return pi_t[pi_t.size() == 1 ? 0 : t];
  };
  auto rho_at = [&](int t) -> const OpponentModel& {
    return rho_t[rho_t.size() == 1 ? 0 : t];
  };
  auto marg_at = [&](int t) -> const std::vector<StatePolicy>* {
    if (true_marginals_t == nullptr) return nullptr;
    return &(*true_marginals_t)[true_marginals_t->size() == 1 ? 0 : t];
  };

  auto compose = game.joints.compose_table(agent);

  SoftQTable out;
  out.agent = agent;
  out.mode = mode;
  out.q.assign(horizon,
               std::vector<double>(
                   static_cast<size_t>(game.n_states) * game.joints.size(),
                   0.0));
  out.v.assign(horizon, std::vector<double>(game.n_states, 0.0));

  std::vector<double> v_next(game.n_states, 0.0);
  for (int t = horizon - 1; t >= 0; --t) {
    auto ctx = build_contexts(game, agent, rho_at(t), mode, marg_at(t));
    // Finite horizons follow the undiscounted objective.
    backup(game, agent, pi_at(t), ctx, compose, 1.0, v_next, &out.q[t],
           &out.v[t]);
    v_next = out.v[t];
  }
  return out;
}

double elbo(const GameSpec& game, int agent, const ConditionedPolicy& pi,
            const OpponentModel& rho, EvalMode mode,
            const std::vector<StatePolicy>* true_marginals, double tol) {
  SoftQTable table =
      soft_policy_evaluation(game, agent, pi, rho, mode, true_marginals, tol);
  double j = 0.0;
  for (int s = 0; s < game.n_states; ++s)
    j += game.initial[s] * table.v[0][s];
  return j;
}

ConditionedPolicy soft_best_response(const GameSpec& game,
                                     const SoftQTable& q_table, int agent) {
  const int n_opp = game.joints.opponent_size(agent);
  const int n_own = game.n_actions[agent];
  const int n_joint = game.joints.size();
  auto compose = game.joints.compose_table(agent);

  ConditionedPolicy out(agent, game.n_states, n_opp, n_own);
  std::vector<double> scores(n_own);
  for (int s = 0; s < game.n_states; ++s) {
    for (int o = 0; o < n_opp; ++o) {
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        scores[a] = q_table.q[0][static_cast<size_t>(s) * n_joint + joint];
        VSG_CHECK(std::isfinite(scores[a]),
                  "soft_best_response: non-finite Q value");
      }
      softmax_inplace(scores);
      auto row = out.row(s, o);
      std::copy(scores.begin(), scores.end(), row.begin());
    }
  }
  return out;
}

}  // namespace vsg
