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

#include "vsg/mean_field.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsg/check.h"
#include "vsg/distributions.h"

namespace vsg {

double MeanField::max_slice_tv(const MeanField& other) const {
  double m = 0.0;
  for (int t = 0; t < slices(); ++t) m = std::max(m, tv(l[t], other.l[t]));
  return m;
}

std::vector<double> kolmogorov_step(const MFGameSpec& mf_game,
                                    std::span<const double> l_prev,
                                    const StatePolicy& pi_t) {
  const int S = mf_game.n_states;
  const int A = mf_game.n_actions;
  std::vector<double> state_mass(S, 0.0);
  std::vector<double> trans_row(S);
  for (int s_prev = 0; s_prev < S; ++s_prev) {
    for (int a_prev = 0; a_prev < A; ++a_prev) {
      const double mass = l_prev[static_cast<size_t>(s_prev) * A + a_prev];
      if (mass == 0.0) continue;
      mf_game.transition(s_prev, a_prev, l_prev, trans_row);
      for (int s = 0; s < S; ++s) state_mass[s] += mass * trans_row[s];
    }
  }
  std::vector<double> out(static_cast<size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a)
      out[static_cast<size_t>(s) * A + a] = pi_t.at(s, a) * state_mass[s];
  }
  return out;
}

MeanField forward_flow(const MFGameSpec& mf_game,
                       const std::vector<StatePolicy>& pi) {
  const int S = mf_game.n_states;
  const int A = mf_game.n_actions;
  const int slices = mf_game.horizon + 1;
  VSG_CHECK(static_cast<int>(pi.size()) == slices,
            "forward_flow: policy must have T+1 slices");
  MeanField out(S, A, slices);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a)
      out.at(0, s, a) = mf_game.initial[s] * pi[0].at(s, a);
  }
  for (int t = 1; t < slices; ++t)
    out.l[t] = kolmogorov_step(mf_game, out.l[t - 1], pi[t]);
  return out;
}

std::vector<std::vector<double>> soft_q_backward(
    const MFGameSpec& mf_game, const MeanField& mean_field,
    const TimePolicy& policy_and_prior) {
  const int S = mf_game.n_states;
  const int A = mf_game.n_actions;
  const int T = mf_game.horizon;
  VSG_CHECK(mean_field.slices() == T + 1,
            "soft_q_backward: mean field must have T+1 slices");
  VSG_CHECK(static_cast<int>(policy_and_prior.policy.size()) == T + 1 &&
                static_cast<int>(policy_and_prior.prior.size()) == T + 1,
            "soft_q_backward: policy/prior must have T+1 slices");

  std::vector<std::vector<double>> q(
      T + 1, std::vector<double>(static_cast<size_t>(S) * A, 0.0));
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a)
      q[T][static_cast<size_t>(s) * A + a] =
          mf_game.reward(s, a, mean_field.l[T]);
  }
  std::vector<double> bracket(S);
  std::vector<double> trans_row(S);
  for (int t = T - 1; t >= 0; --t) {
    const StatePolicy& pi_next = policy_and_prior.policy[t + 1];
    const StatePolicy& prior_next = policy_and_prior.prior[t + 1];
    for (int s2 = 0; s2 < S; ++s2) {
      double acc = 0.0;
      for (int a2 = 0; a2 < A; ++a2) {
        const double p = pi_next.at(s2, a2);
        if (p <= 0.0) continue;
        acc += p * (q[t + 1][static_cast<size_t>(s2) * A + a2] - std::log(p) +
                    std::log(std::max(prior_next.at(s2, a2), kProbFloor)));
      }
      bracket[s2] = acc;
    }
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        mf_game.transition(s, a, mean_field.l[t], trans_row);
        double cont = 0.0;
        for (int s2 = 0; s2 < S; ++s2) cont += trans_row[s2] * bracket[s2];
        q[t][static_cast<size_t>(s) * A + a] =
            mf_game.reward(s, a, mean_field.l[t]) + cont;
      }
    }
  }
  return q;
}

StatePolicy closed_form_policy(int n_states, int n_actions,
                               std::span<const double> q_t,
                               const StatePolicy& prior_t) {
  StatePolicy out(n_states, n_actions);
  std::vector<double> scores(n_actions);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a)
      scores[a] = q_t[static_cast<size_t>(s) * n_actions + a];
    weighted_softmax_inplace(prior_t.row(s), scores);
    std::copy(scores.begin(), scores.end(), out.row(s).begin());
  }
  return out;
}

MFBackwardResult soft_q_backward_opt(const MFGameSpec& mf_game,
                                     const MeanField& mean_field,
                                     const std::vector<StatePolicy>& prior) {
  const int S = mf_game.n_states;
  const int A = mf_game.n_actions;
  const int T = mf_game.horizon;
  VSG_CHECK(static_cast<int>(prior.size()) == T + 1,
            "soft_q_backward_opt: prior must have T+1 slices");

  MFBackwardResult out;
  out.q.assign(T + 1, std::vector<double>(static_cast<size_t>(S) * A, 0.0));
  out.policy.assign(T + 1, StatePolicy(S, A));

  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a)
      out.q[T][static_cast<size_t>(s) * A + a] =
          mf_game.reward(s, a, mean_field.l[T]);
  }
  out.policy[T] = closed_form_policy(S, A, out.q[T], prior[T]);

  std::vector<double> bracket(S);
  std::vector<double> trans_row(S);
  for (int t = T - 1; t >= 0; --t) {
    // With the optimal next-slice policy plugged in, the bracketed
    // expectation equals log sum_a prior(a|s') exp(Q_{t+1}(s', a)).
    for (int s2 = 0; s2 < S; ++s2) {
      double m = -std::numeric_limits<double>::infinity();
      for (int a2 = 0; a2 < A; ++a2)
        m = std::max(m, out.q[t + 1][static_cast<size_t>(s2) * A + a2]);
      double z = 0.0;
      for (int a2 = 0; a2 < A; ++a2)
        z += prior[t + 1].at(s2, a2) *
             std::exp(out.q[t + 1][static_cast<size_t>(s2) * A + a2] - m);
      bracket[s2] = m + std::log(z);
    }
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        mf_game.transition(s, a, mean_field.l[t], trans_row);
        double cont = 0.0;
        for (int s2 = 0; s2 < S; ++s2) cont += trans_row[s2] * bracket[s2];
        out.q[t][static_cast<size_t>(s) * A + a] =
            mf_game.reward(s, a, mean_field.l[t]) + cont;
      }
    }
    out.policy[t] = closed_form_policy(S, A, out.q[t], prior[t]);
  }
  return out;
}

MFResult run_mf_bayesian_q(const MFGameSpec& mf_game, const MFConfig& config) {
  const int S = mf_game.n_states;
  const int A = mf_game.n_actions;
  const int T = mf_game.horizon;
  VSG_CHECK(T >= 0, "run_mf_bayesian_q: horizon must be >= 0");
  VSG_CHECK(config.damping >= 0.0 && config.damping < 1.0,
            "run_mf_bayesian_q: damping must lie in [0, 1)");

  MFResult result;
  std::vector<StatePolicy> uniform(T + 1, StatePolicy::uniform(S, A));
  result.policy = uniform;
  result.mean_field = forward_flow(mf_game, uniform);

  for (int k = 1; k <= config.outer_iters; ++k) {
    const std::vector<StatePolicy>& prior =
        config.prior_mode == MFPriorMode::kPreviousIterate ? result.policy
                                                           : uniform;
    MFBackwardResult backward =
        soft_q_backward_opt(mf_game, result.mean_field, prior);
    MeanField flowed = forward_flow(mf_game, backward.policy);
    if (config.damping > 0.0) {
      for (int t = 0; t <= T; ++t) {
        for (size_t idx = 0; idx < flowed.l[t].size(); ++idx)
          flowed.l[t][idx] = (1.0 - config.damping) * flowed.l[t][idx] +
                             config.damping * result.mean_field.l[t][idx];
      }
    }
    double residual = flowed.max_slice_tv(result.mean_field);
    result.residuals.push_back(residual);
    result.policy = std::move(backward.policy);
    result.mean_field = std::move(flowed);
    result.iterations = k;
    if (config.trace_cadence > 0 && k % config.trace_cadence == 0)
      result.field_trace.emplace_back(k, result.mean_field);
    if (residual < config.residual_tol) {
      result.converged = true;
      break;
    }
  }
  if (config.trace_cadence > 0 &&
      (result.field_trace.empty() ||
       result.field_trace.back().first != result.iterations)) {
    result.field_trace.emplace_back(result.iterations, result.mean_field);
  }
  return result;
}

double mf_exploitability(const MFGameSpec& mf_game,
                         const std::vector<StatePolicy>& policy,
                         const MeanField& mean_field) {
  const int S = mf_game.n_states;
  const int A = mf_game.n_actions;
  const int T = mf_game.horizon;

  // Best unregularized response by backward induction against frozen L.
  std::vector<double> v_best(S, 0.0), v_pol(S, 0.0);
  std::vector<double> trans_row(S);
  for (int t = T; t >= 0; --t) {
    std::vector<double> nb(S, 0.0), np(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      double achieved = 0.0;
      for (int a = 0; a < A; ++a) {
        double q = mf_game.reward(s, a, mean_field.l[t]);
        double qp = q;
        if (t < T) {
          mf_game.transition(s, a, mean_field.l[t], trans_row);
          double cont_b = 0.0, cont_p = 0.0;
          for (int s2 = 0; s2 < S; ++s2) {
            cont_b += trans_row[s2] * v_best[s2];
            cont_p += trans_row[s2] * v_pol[s2];
          }
          q += cont_b;
          qp += cont_p;
        }
        best = std::max(best, q);
        achieved += policy[t].at(s, a) * qp;
      }
      nb[s] = best;
      np[s] = achieved;
    }
    v_best = std::move(nb);
    v_pol = std::move(np);
  }
  double gap = 0.0;
  for (int s = 0; s < S; ++s)
    gap += mf_game.initial[s] * (v_best[s] - v_pol[s]);
  return gap;
}

MFGameSpec crowd_aversion_toy(int horizon, double crowd_weight) {
  MFGameSpec mf;
  mf.n_states = 1;
  mf.n_actions = 3;
  mf.horizon = horizon;
  mf.initial = {1.0};
  mf.reward = [crowd_weight](int /*s*/, int a,
                             std::span<const double> mean_field) {
    static const double base[3] = {2.0, 1.0, 0.0};
    return base[a] - crowd_weight * mean_field[a];
  };
  mf.transition = [](int, int, std::span<const double>,
                     std::span<double> out) { out[0] = 1.0; };
  return mf;
}

MFGameSpec crowd_line_toy(int horizon, double crowd_weight) {
  MFGameSpec mf;
  mf.n_states = 3;
  mf.n_actions = 3;  // 0 = left, 1 = stay, 2 = right
  mf.horizon = horizon;
  mf.initial = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  mf.reward = [crowd_weight](int s, int a,
                             std::span<const double> mean_field) {
    static const double bonus[3] = {0.0, 1.0, 0.0};
    double move_cost = a == 1 ? 0.0 : 0.1;
    return bonus[s] - move_cost -
           crowd_weight * mean_field[static_cast<size_t>(s) * 3 + a];
  };
  mf.transition = [](int s, int a, std::span<const double>,
                     std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    int target = std::clamp(s + (a - 1), 0, 2);
    out[target] = 1.0;
  };
  return mf;
}

MFGameSpec l_independent_toy(int horizon) {
  MFGameSpec mf;
  mf.n_states = 2;
  mf.n_actions = 2;
  mf.horizon = horizon;
  mf.initial = {1.0, 0.0};
  mf.reward = [](int s, int a, std::span<const double>) {
    static const double r[2][2] = {{1.0, -0.2}, {0.3, 0.8}};
    return r[s][a];
  };
  mf.transition = [](int s, int a, std::span<const double>,
                     std::span<double> out) {
    // Action 0 tends to keep the state, action 1 tends to flip it.
    double stay = a == 0 ? 0.9 : 0.2;
    out[s] = stay;
    out[1 - s] = 1.0 - stay;
  };
  return mf;
}

}  // namespace vsg
