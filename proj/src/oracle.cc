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

#include "vsg/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsg/check.h"
#include "vsg/distributions.h"
#include "vsg/soft_eval.h"

namespace vsg {

namespace {

constexpr double kOracleTol = 1e-12;

double effective_discount(const GameSpec& game) {
  return game.pre_discounted ? 1.0 : game.gamma;
}

// Distribution over the opponents' joint actions at state s, the product of
// the supplied marginals.
std::vector<double> opponent_joint_distribution(
    const GameSpec& game, int agent, const std::vector<StatePolicy>& marginals,
    int s) {
  const int n_opp = game.joints.opponent_size(agent);
  std::vector<double> out(n_opp, 1.0);
  for (int o = 0; o < n_opp; ++o) {
    std::vector<int> actions = game.joints.decode_opponent(agent, o);
    int pos = 0;
    for (int j = 0; j < game.n_agents; ++j) {
      if (j == agent) continue;
      out[o] *= marginals[j].at(s, actions[pos]);
      ++pos;
    }
  }
  return out;
}

// Expected reward and state kernel of agent i against frozen opponents.
void reduce_against_opponents(const GameSpec& game, int agent,
                              const std::vector<StatePolicy>& opponents,
                              std::vector<double>* rbar,
                              std::vector<double>* kernel) {
  const int n_own = game.n_actions[agent];
  const int n_opp = game.joints.opponent_size(agent);
  auto compose = game.joints.compose_table(agent);
  rbar->assign(static_cast<size_t>(game.n_states) * n_own, 0.0);
  kernel->assign(static_cast<size_t>(game.n_states) * n_own * game.n_states,
                 0.0);
  for (int s = 0; s < game.n_states; ++s) {
    std::vector<double> w = opponent_joint_distribution(game, agent, opponents, s);
    for (int o = 0; o < n_opp; ++o) {
      if (w[o] == 0.0) continue;
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        (*rbar)[static_cast<size_t>(s) * n_own + a] +=
            w[o] * game.r(agent, s, joint);
        auto trans = game.transition_row(s, joint);
        for (int s2 = 0; s2 < game.n_states; ++s2)
          (*kernel)[(static_cast<size_t>(s) * n_own + a) * game.n_states +
                    s2] += w[o] * trans[s2];
      }
    }
  }
}

Eigen::MatrixXd product_kernel(const GameSpec& game,
                               const std::vector<StatePolicy>& marginals) {
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(game.n_states, game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    for (int a = 0; a < game.joints.size(); ++a) {
      double w = 1.0;
      for (int k = 0; k < game.n_agents; ++k)
        w *= marginals[k].at(s, game.joints.own_action(k, a));
      if (w == 0.0) continue;
      auto trans = game.transition_row(s, a);
      for (int s2 = 0; s2 < game.n_states; ++s2)
        kernel(s, s2) += w * trans[s2];
    }
  }
  return kernel;
}

}  // namespace

BestResponse exact_best_response(const GameSpec& game, int agent,
                                 const std::vector<StatePolicy>& opponents) {
  const int n_own = game.n_actions[agent];
  std::vector<double> rbar, kernel;
  reduce_against_opponents(game, agent, opponents, &rbar, &kernel);

  BestResponse br;
  if (game.horizon.is_finite) {
    const int horizon = game.horizon.steps;
    br.time_indexed = true;
    br.actions.assign(static_cast<size_t>(horizon) * game.n_states, 0);
    std::vector<double> v(game.n_states, 0.0);
    for (int t = horizon - 1; t >= 0; --t) {
      std::vector<double> nv(game.n_states);
      for (int s = 0; s < game.n_states; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int a = 0; a < n_own; ++a) {
          double q = rbar[static_cast<size_t>(s) * n_own + a];
          for (int s2 = 0; s2 < game.n_states; ++s2)
            q += kernel[(static_cast<size_t>(s) * n_own + a) * game.n_states +
                        s2] *
                 v[s2];
          if (q > best) {
            best = q;
            best_a = a;
          }
        }
        nv[s] = best;
        br.actions[static_cast<size_t>(t) * game.n_states + s] = best_a;
      }
      v = std::move(nv);
    }
    br.value = v;
    return br;
  }

  const double disc = effective_discount(game);
  VSG_CHECK(game.pre_discounted || game.gamma < 1.0,
            "exact_best_response: non-contractive discount");
  br.actions.assign(game.n_states, 0);
  std::vector<double> v(game.n_states, 0.0);
  const long cap = 100000000;
  for (long it = 0; it < cap; ++it) {
    double residual = 0.0;
    std::vector<double> nv(game.n_states);
    for (int s = 0; s < game.n_states; ++s) {
      if (game.pre_discounted && s == game.absorbing_state) {
        nv[s] = 0.0;
        br.actions[s] = 0;
        continue;
      }
      double best = -std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < n_own; ++a) {
        double q = rbar[static_cast<size_t>(s) * n_own + a];
        for (int s2 = 0; s2 < game.n_states; ++s2)
          q += disc *
               kernel[(static_cast<size_t>(s) * n_own + a) * game.n_states +
                      s2] *
               v[s2];
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      nv[s] = best;
      br.actions[s] = best_a;
      residual = std::max(residual, std::abs(nv[s] - v[s]));
    }
    v = std::move(nv);
    if (residual < kOracleTol) {
      br.value = v;
      return br;
    }
  }
  throw ConvergenceError("exact_best_response: value iteration cap hit", 0.0);
}

std::vector<double> unregularized_values(
    const GameSpec& game, const std::vector<StatePolicy>& marginals) {
  std::vector<double> out(game.n_agents, 0.0);
  Eigen::MatrixXd kernel = product_kernel(game, marginals);
  for (int i = 0; i < game.n_agents; ++i) {
    Eigen::VectorXd rbar = Eigen::VectorXd::Zero(game.n_states);
    for (int s = 0; s < game.n_states; ++s) {
      for (int a = 0; a < game.joints.size(); ++a) {
        double w = 1.0;
        for (int k = 0; k < game.n_agents; ++k)
          w *= marginals[k].at(s, game.joints.own_action(k, a));
        rbar(s) += w * game.r(i, s, a);
      }
    }
    Eigen::VectorXd v;
    if (game.horizon.is_finite) {
      v = Eigen::VectorXd::Zero(game.n_states);
      for (int t = 0; t < game.horizon.steps; ++t) v = rbar + kernel * v;
    } else {
      const double disc = effective_discount(game);
      Eigen::MatrixXd system = kernel;
      if (game.pre_discounted) {
        // Pin the absorbing state at value zero; its self-loop would
        // otherwise make the undiscounted system singular.
        system.row(game.absorbing_state).setZero();
      }
      system = Eigen::MatrixXd::Identity(game.n_states, game.n_states) -
               disc * system;
      v = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(rbar);
    }
    for (int s = 0; s < game.n_states; ++s) out[i] += game.initial[s] * v(s);
  }
  return out;
}

ExploitabilityReport exploitability(
    const GameSpec& game, const std::vector<StatePolicy>& marginals) {
  ExploitabilityReport report;
  std::vector<double> achieved = unregularized_values(game, marginals);
  report.gaps.resize(game.n_agents);
  report.max_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.n_agents; ++i) {
    BestResponse br = exact_best_response(game, i, marginals);
    double best = 0.0;
    for (int s = 0; s < game.n_states; ++s)
      best += game.initial[s] * br.value[s];
    report.gaps[i] = best - achieved[i];
    report.max_gap = std::max(report.max_gap, report.gaps[i]);
  }
  return report;
}

ExploitabilityReport exploitability_time_indexed(
    const GameSpec& game,
    const std::vector<std::vector<StatePolicy>>& marginals_t) {
  VSG_CHECK(game.horizon.is_finite,
            "exploitability_time_indexed: finite-horizon game required");
  const int horizon = game.horizon.steps;
  VSG_CHECK(static_cast<int>(marginals_t.size()) == horizon,
            "exploitability_time_indexed: need one marginal set per epoch");

  ExploitabilityReport report;
  report.gaps.resize(game.n_agents);
  report.max_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.n_agents; ++i) {
    const int n_own = game.n_actions[i];
    std::vector<double> v_best(game.n_states, 0.0);
    std::vector<double> v_play(game.n_states, 0.0);
    for (int t = horizon - 1; t >= 0; --t) {
      std::vector<double> rbar, kernel;
      reduce_against_opponents(game, i, marginals_t[t], &rbar, &kernel);
      std::vector<double> nb(game.n_states), np(game.n_states);
      for (int s = 0; s < game.n_states; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        double play = 0.0;
        for (int a = 0; a < n_own; ++a) {
          double q_best = rbar[static_cast<size_t>(s) * n_own + a];
          double q_play = q_best;
          for (int s2 = 0; s2 < game.n_states; ++s2) {
            const double p =
                kernel[(static_cast<size_t>(s) * n_own + a) * game.n_states +
                       s2];
            q_best += p * v_best[s2];
            q_play += p * v_play[s2];
          }
          best = std::max(best, q_best);
          play += marginals_t[t][i].at(s, a) * q_play;
        }
        nb[s] = best;
        np[s] = play;
      }
      v_best = std::move(nb);
      v_play = std::move(np);
    }
    double gap = 0.0;
    for (int s = 0; s < game.n_states; ++s)
      gap += game.initial[s] * (v_best[s] - v_play[s]);
    report.gaps[i] = gap;
    report.max_gap = std::max(report.max_gap, gap);
  }
  return report;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kThm42:
      return "finite-horizon";
    case BoundKind::kThm58Joint:
      return "discounted-joint";
    case BoundKind::kThm58Max:
      return "discounted-max";
  }
  return "unknown";
}

Certification certify_eps_nash(const ExploitabilityReport& report,
                               const GameSpec& game, BoundKind kind,
                               double delta) {
  Certification cert;
  cert.kind = kind;
  cert.delta = delta;
  cert.max_gap = report.max_gap;
  int max_a = *std::max_element(game.n_actions.begin(), game.n_actions.end());
  switch (kind) {
    case BoundKind::kThm42:
      VSG_CHECK(game.horizon.is_finite,
                "certify_eps_nash: finite-horizon bound on an "
                "infinite-horizon game");
      cert.bound = game.horizon.steps * std::log(static_cast<double>(max_a));
      break;
    case BoundKind::kThm58Joint: {
      VSG_CHECK(!game.horizon.is_finite,
                "certify_eps_nash: discounted bound on a finite-horizon game");
      double log_joint = 0.0;
      for (int a : game.n_actions) log_joint += std::log(a);
      cert.bound = delta + log_joint / (1.0 - game.gamma);
      break;
    }
    case BoundKind::kThm58Max:
      VSG_CHECK(!game.horizon.is_finite,
                "certify_eps_nash: discounted bound on a finite-horizon game");
      cert.bound =
          delta + std::log(static_cast<double>(max_a)) / (1.0 - game.gamma);
      break;
  }
  cert.pass = report.max_gap <= cert.bound;
  return cert;
}

double prop55_delta(double gamma, int n_actions_i, double eps_rho) {
  const double g = 1.0 - gamma;
  return 2.0 * (1.0 + std::log(static_cast<double>(n_actions_i))) / (g * g) *
             std::sqrt(0.5 * eps_rho) +
         eps_rho / g;
}

double soft_nash_residual(const GameSpec& game,
                          const std::vector<ConditionedPolicy>& policies,
                          const std::vector<OpponentModel>& models,
                          double eval_tol) {
  double residual = 0.0;
  for (int i = 0; i < game.n_agents; ++i) {
    SoftQTable q =
        soft_policy_evaluation(game, i, policies[i], models[i],
                               EvalMode::kModeledOpponent, nullptr, eval_tol);
    ConditionedPolicy br = soft_best_response(game, q, i);
    residual = std::max(residual, policies[i].max_row_tv(br));
  }
  return residual;
}

std::vector<double> coupled_visitation(const GameSpec& game, int agent,
                                       const ConditionedPolicy& pi,
                                       const OpponentModel& rho) {
  VSG_CHECK(!game.horizon.is_finite && !game.pre_discounted,
            "coupled_visitation: discounted game required");
  const int n_own = game.n_actions[agent];
  auto compose = game.joints.compose_table(agent);
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(game.n_states, game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    std::vector<double> w = rho.joint_row(game.joints, s);
    for (int o = 0; o < static_cast<int>(w.size()); ++o) {
      if (w[o] == 0.0) continue;
      auto row = pi.row(s, o);
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        auto trans = game.transition_row(s, joint);
        const double mass = w[o] * row[a];
        for (int s2 = 0; s2 < game.n_states; ++s2)
          kernel(s, s2) += mass * trans[s2];
      }
    }
  }
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(game.n_states, game.n_states) -
      game.gamma * kernel.transpose();
  Eigen::VectorXd b(game.n_states);
  for (int s = 0; s < game.n_states; ++s)
    b(s) = (1.0 - game.gamma) * game.initial[s];
  Eigen::VectorXd d = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(b);
  return std::vector<double>(d.data(), d.data() + game.n_states);
}

double subjective_elbo(const GameSpec& game, int agent,
                       const ConditionedPolicy& pi, const OpponentModel& rho) {
  VSG_CHECK(!game.horizon.is_finite && !game.pre_discounted,
            "subjective_elbo: discounted game required");
  const int n_own = game.n_actions[agent];
  auto compose = game.joints.compose_table(agent);
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(game.n_states, game.n_states);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    std::vector<double> w = rho.joint_row(game.joints, s);
    for (int o = 0; o < static_cast<int>(w.size()); ++o) {
      if (w[o] == 0.0) continue;
      auto row = pi.row(s, o);
      double step_term = entropy(row);
      for (int a = 0; a < n_own; ++a) {
        const int joint = compose[static_cast<size_t>(o) * n_own + a];
        step_term += row[a] * game.r(agent, s, joint);
        auto trans = game.transition_row(s, joint);
        const double mass = w[o] * row[a];
        for (int s2 = 0; s2 < game.n_states; ++s2)
          kernel(s, s2) += mass * trans[s2];
      }
      b(s) += w[o] * step_term;
    }
  }
  Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(game.n_states, game.n_states) -
      game.gamma * kernel;
  Eigen::VectorXd v = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(b);
  double j = 0.0;
  for (int s = 0; s < game.n_states; ++s) j += game.initial[s] * v(s);
  return j;
}

std::vector<ConditionedPolicy> global_npg_reference_step(
    const GameSpec& game, const std::vector<ConditionedPolicy>& policies,
    const std::vector<OpponentModel>& models, double eta, double fd_step,
    double cutoff) {
  std::vector<ConditionedPolicy> out;
  out.reserve(game.n_agents);
  for (int i = 0; i < game.n_agents; ++i) {
    const ConditionedPolicy& pi = policies[i];
    const int n_own = pi.n_own();
    const int n_opp = pi.n_opponent();
    const int dims = game.n_states * n_opp * n_own;

    std::vector<double> theta(dims);
    for (int s = 0; s < game.n_states; ++s) {
      for (int o = 0; o < n_opp; ++o) {
        for (int a = 0; a < n_own; ++a)
          theta[(static_cast<size_t>(s) * n_opp + o) * n_own + a] =
              std::log(pi.at(s, o, a));
      }
    }
    auto policy_from = [&](const std::vector<double>& logits) {
      ConditionedPolicy p(i, game.n_states, n_opp, n_own);
      std::vector<double> scores(n_own);
      for (int s = 0; s < game.n_states; ++s) {
        for (int o = 0; o < n_opp; ++o) {
          for (int a = 0; a < n_own; ++a)
            scores[a] = logits[(static_cast<size_t>(s) * n_opp + o) * n_own + a];
          softmax_inplace(scores);
          std::copy(scores.begin(), scores.end(), p.row(s, o).begin());
        }
      }
      return p;
    };

    // Central finite differences of the subjective objective.
    Eigen::VectorXd grad(dims);
    std::vector<double> work = theta;
    for (int k = 0; k < dims; ++k) {
      work[k] = theta[k] + fd_step;
      double plus = subjective_elbo(game, i, policy_from(work), models[i]);
      work[k] = theta[k] - fd_step;
      double minus = subjective_elbo(game, i, policy_from(work), models[i]);
      work[k] = theta[k];
      grad(k) = (plus - minus) / (2.0 * fd_step);
    }

    // Exact Fisher of the conditional policy, block-diagonal over rows,
    // weighted by the coupled visitation.
    std::vector<double> d = coupled_visitation(game, i, pi, models[i]);
    Eigen::MatrixXd fisher = Eigen::MatrixXd::Zero(dims, dims);
    for (int s = 0; s < game.n_states; ++s) {
      std::vector<double> w = models[i].joint_row(game.joints, s);
      for (int o = 0; o < n_opp; ++o) {
        const double weight = d[s] * w[o];
        auto row = pi.row(s, o);
        const int base = (s * n_opp + o) * n_own;
        for (int a = 0; a < n_own; ++a) {
          for (int a2 = 0; a2 < n_own; ++a2) {
            double cov = (a == a2 ? row[a] : 0.0) - row[a] * row[a2];
            fisher(base + a, base + a2) = weight * cov;
          }
        }
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dims);
    int kept = 0;
    for (int k = 0; k < dims; ++k) {
      const double lambda = eig.eigenvalues()(k);
      if (lambda > cutoff) {
        x += eig.eigenvectors().col(k) *
             (eig.eigenvectors().col(k).dot(grad) / lambda);
        ++kept;
      }
    }
    if (kept == 0) {
      throw DegenerateFisherError(
          "global_npg_reference_step: no usable Fisher directions above the "
          "cutoff");
    }
    std::vector<double> updated(dims);
    for (int k = 0; k < dims; ++k) updated[k] = theta[k] + eta * x(k);
    out.push_back(policy_from(updated));
  }
  return out;
}

std::vector<Eigen::MatrixXd> per_state_joint_fisher(
    const GameSpec& game, const std::vector<ConditionedPolicy>& policies,
    const std::vector<OpponentModel>& models) {
  const int n = game.n_agents;
  std::vector<int> dims(n), offsets(n, 0);
  int total = 0;
  for (int i = 0; i < n; ++i) {
    dims[i] = policies[i].n_opponent() * policies[i].n_own();
    offsets[i] = total;
    total += dims[i];
  }

  std::vector<Eigen::MatrixXd> fishers;
  fishers.reserve(game.n_states);
  for (int s = 0; s < game.n_states; ++s) {
    // Marginals and model weights at this state.
    std::vector<std::vector<double>> rho_rows(n), marginal(n);
    for (int i = 0; i < n; ++i) {
      rho_rows[i] = models[i].joint_row(game.joints, s);
      marginal[i].assign(game.n_actions[i], 0.0);
      for (int o = 0; o < policies[i].n_opponent(); ++o) {
        auto row = policies[i].row(s, o);
        for (int a = 0; a < game.n_actions[i]; ++a)
          marginal[i][a] += rho_rows[i][o] * row[a];
      }
    }
    Eigen::MatrixXd fisher = Eigen::MatrixXd::Zero(total, total);
    Eigen::VectorXd score(total);
    for (int joint = 0; joint < game.joints.size(); ++joint) {
      double prob = 1.0;
      for (int i = 0; i < n; ++i)
        prob *= marginal[i][game.joints.own_action(i, joint)];
      if (prob == 0.0) continue;
      score.setZero();
      for (int i = 0; i < n; ++i) {
        const int b = game.joints.own_action(i, joint);
        for (int o = 0; o < policies[i].n_opponent(); ++o) {
          auto row = policies[i].row(s, o);
          for (int a = 0; a < game.n_actions[i]; ++a) {
            // d log m_i(b|s) / d theta_{i,o,a}
            double dm = rho_rows[i][o] * row[b] *
                        ((a == b ? 1.0 : 0.0) - row[a]);
            score(offsets[i] + o * game.n_actions[i] + a) =
                dm / marginal[i][b];
          }
        }
      }
      fisher += prob * score * score.transpose();
    }
    fishers.push_back(std::move(fisher));
  }
  return fishers;
}

double max_cross_agent_fisher_entry(
    const GameSpec& game, const std::vector<Eigen::MatrixXd>& fishers) {
  const int n = game.n_agents;
  std::vector<int> dims(n), offsets(n, 0);
  int total = 0;
  for (int i = 0; i < n; ++i) {
    dims[i] = (game.joints.opponent_size(i)) * game.n_actions[i];
    offsets[i] = total;
    total += dims[i];
  }
  double max_entry = 0.0;
  for (const Eigen::MatrixXd& fisher : fishers) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int r = 0; r < dims[i]; ++r) {
          for (int c = 0; c < dims[j]; ++c) {
            max_entry = std::max(
                max_entry, std::abs(fisher(offsets[i] + r, offsets[j] + c)));
          }
        }
      }
    }
  }
  return max_entry;
}

}  // namespace vsg
