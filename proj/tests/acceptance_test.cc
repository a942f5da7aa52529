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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// every tolerance is pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "vsg/distributions.h"
#include "vsg/equilibria_ext.h"
#include "vsg/generators.h"
#include "vsg/mean_field.h"
#include "vsg/opponent_modeling.h"
#include "vsg/oracle.h"
#include "vsg/soft_eval.h"
#include "vsg/vpg.h"

namespace vsg {
namespace {

struct Criterion {
  int number;
  const char* summary;
  bool ok = true;
  ~Criterion() {
    std::printf("[criterion %2d] %s -- %s\n", number, ok ? "PASS" : "FAIL",
                summary);
    std::fflush(stdout);
  }
};

#define ACCEPT(criterion, expr)        \
  do {                                 \
    const bool accept_ok_ = (expr);    \
    (criterion).ok &= accept_ok_;      \
    CHECK_MESSAGE(accept_ok_, #expr);  \
  } while (0)

GameSpec family_game(int g) {
  return make_random_identical_interest_mpg(9000 + g, 2, 2, 2, 0.9);
}

ConditionedPolicy random_policy(const GameSpec& game, int agent,
                                std::mt19937_64& rng) {
  ConditionedPolicy pi = ConditionedPolicy::uniform(game, agent);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int s = 0; s < pi.n_states(); ++s) {
    for (int o = 0; o < pi.n_opponent(); ++o) {
      auto row = pi.row(s, o);
      double sum = 0.0;
      for (double& x : row) {
        x = unit(rng);
        sum += x;
      }
      for (double& x : row) x /= sum;
    }
  }
  return pi;
}

StatePolicy random_marginal(int states, int actions, std::mt19937_64& rng) {
  StatePolicy m(states, actions);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int s = 0; s < states; ++s) {
    auto row = m.row(s);
    double sum = 0.0;
    for (double& x : row) {
      x = unit(rng);
      sum += x;
    }
    for (double& x : row) x /= sum;
  }
  return m;
}

TEST_CASE("criterion 1: differential game reaches the global optimum") {
  Criterion criterion{1,
                      "variational VPG reaches greedy reward >= 9.5 on >= "
                      "8/10 seeds within 60 s each"};
  int good = 0;
  double slowest = 0.0;
  for (int seed = 1; seed <= 10; ++seed) {
    auto start = std::chrono::steady_clock::now();
    GameSpec game = make_differential_game(41, 0.9);
    VPGConfig config;
    config.opponent_mode = OpponentMode::kVariational;
    config.seed = static_cast<std::uint64_t>(seed);
    config.max_iters = 120;
    config.policy_tol = 1e-6;
    config.eval_tol = 1e-9;
    config.episodes_per_iter = 4;
    config.episode_len = 25;
    config.om.step = 0.5;
    config.om.inner_iters = 2;
    VPGResult result = run_vpg(game, config);
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    slowest = std::max(slowest, seconds);
    int a0 = 0, a1 = 0;
    for (int a = 1; a < 41; ++a) {
      if (result.marginals[0].at(0, a) > result.marginals[0].at(0, a0)) a0 = a;
      if (result.marginals[1].at(0, a) > result.marginals[1].at(0, a1)) a1 = a;
    }
    double greedy = game.r(0, 0, game.joints.encode({a0, a1}));
    if (greedy >= 9.5) ++good;
    ACCEPT(criterion, seconds <= 60.0);
  }
  std::printf("    greedy >= 9.5 on %d/10 seeds, slowest run %.2f s\n", good,
              slowest);
  ACCEPT(criterion, good >= 8);
}

TEST_CASE("criterion 2: per-agent update equals the global NPG reference") {
  Criterion criterion{2,
                      "closed-form round within per-row TV 1e-6 of the "
                      "explicit-Fisher step; cross-agent blocks <= 1e-8"};
  double worst_tv = 0.0;
  double worst_cross = 0.0;
  const double eta = 0.05;
  for (int g = 0; g < 20; ++g) {
    GameSpec game = family_game(g);
    // Two evaluation points: the uniform start and a mid-run iterate.
    for (int warmup : {0, 15}) {
      std::vector<ConditionedPolicy> policies;
      if (warmup == 0) {
        for (int i = 0; i < 2; ++i)
          policies.push_back(ConditionedPolicy::uniform(game, i));
      } else {
        VPGConfig config;
        config.max_iters = warmup;
        config.policy_tol = 1e-14;
        policies = run_vpg(game, config).policies;
      }
      std::vector<StatePolicy> marginals =
          consistent_marginals(game, policies);
      std::vector<OpponentModel> models = {
          model_from_marginals(game, 0, marginals),
          model_from_marginals(game, 1, marginals)};
      std::vector<ConditionedPolicy> reference =
          global_npg_reference_step(game, policies, models, eta);
      for (int i = 0; i < 2; ++i) {
        SoftQTable q = soft_policy_evaluation(game, i, policies[i], models[i],
                                              EvalMode::kModeledOpponent,
                                              nullptr, 1e-13);
        ConditionedPolicy closed =
            npg_step(game, policies[i], q, eta, game.gamma);
        worst_tv = std::max(worst_tv, closed.max_row_tv(reference[i]));
      }
      worst_cross = std::max(
          worst_cross,
          max_cross_agent_fisher_entry(
              game, per_state_joint_fisher(game, policies, models)));
    }
  }
  std::printf("    worst per-row TV %.3e, worst cross-agent entry %.3e\n",
              worst_tv, worst_cross);
  ACCEPT(criterion, worst_tv <= 1e-6);
  ACCEPT(criterion, worst_cross <= 1e-8);
}

TEST_CASE("criterion 3: potential trace is monotone at eta = 1/L") {
  Criterion criterion{3,
                      "potential never decreases by more than 1e-9 over 200 "
                      "iterations on 20 games"};
  double worst_drop = 0.0;
  for (int g = 0; g < 20; ++g) {
    GameSpec game = family_game(g);
    VPGConfig config;
    config.eta = 1.0 / smoothness_constant(2, game.gamma, 2);
    config.max_iters = 200;
    config.policy_tol = 1e-15;
    config.eval_tol = 1e-13;
    VPGResult result = run_vpg(game, config);
    ACCEPT(criterion, result.trace.size() == 200);
    for (size_t k = 1; k < result.trace.size(); ++k) {
      worst_drop = std::max(
          worst_drop, result.trace[k - 1].potential - result.trace[k].potential);
    }
  }
  std::printf("    worst potential drop %.3e\n", worst_drop);
  ACCEPT(criterion, worst_drop <= 1e-9);
}

TEST_CASE("criterion 4: converged exploitability meets the discounted bound") {
  Criterion criterion{4,
                      "exact exploitability of converged oracle runs <= "
                      "log|A|/(1-gamma), joint reading"};
  double worst_gap = 0.0;
  bool joint_pass = true;
  bool max_pass = true;
  for (int g = 0; g < 20; ++g) {
    GameSpec game = family_game(g);
    VPGConfig config;
    config.max_iters = 20000;
    config.policy_tol = 1e-8;
    VPGResult result = run_vpg(game, config);
    ACCEPT(criterion, result.converged);
    ExploitabilityReport report = exploitability(game, result.marginals);
    worst_gap = std::max(worst_gap, report.max_gap);
    joint_pass = joint_pass &&
                 certify_eps_nash(report, game, BoundKind::kThm58Joint, 0.0)
                     .pass;
    max_pass =
        max_pass &&
        certify_eps_nash(report, game, BoundKind::kThm58Max, 0.0).pass;
  }
  std::printf(
      "    worst gap %.4f; joint bound %.4f (asserted), max-agent bound %.4f "
      "(reported: %s)\n",
      worst_gap, std::log(4.0) / 0.1, std::log(2.0) / 0.1,
      max_pass ? "holds" : "violated");
  ACCEPT(criterion, joint_pass);
}

TEST_CASE("criterion 5: finite-horizon equilibria meet the horizon bound") {
  Criterion criterion{5,
                      "every converged finite-horizon equilibrium has "
                      "exploitability <= T log max|A_i|"};
  int converged = 0;
  for (int k = 0; k < 10; ++k) {
    const int horizon = 2 + (k % 9);
    const int actions = 2 + (k % 3);
    GameSpec game =
        k % 2 == 0
            ? make_random_identical_interest_mpg(9100 + k, 2, 2, actions, 0.9)
            : make_random_general_sum(9100 + k, 2, 2, actions, 0.9);
    game.horizon = Horizon::finite(horizon);
    FiniteSoftResult result = solve_finite_horizon_soft(game, 0.5, 1e-10, 5000);
    if (!result.converged) continue;
    ++converged;
    ExploitabilityReport report =
        exploitability_time_indexed(game, result.marginals);
    Certification cert = certify_eps_nash(report, game, BoundKind::kThm42);
    ACCEPT(criterion, cert.pass);
    ACCEPT(criterion, report.max_gap >= -1e-9);
  }
  std::printf("    %d/10 solves converged and were certified\n", converged);
  ACCEPT(criterion, converged == 10);
}

TEST_CASE("criterion 6: model-error bound holds over random perturbations") {
  Criterion criterion{6,
                      "max |Q - Q^| <= 2(1+log|A_i|)/(1-g)^2 sqrt(e/2) + "
                      "e/(1-g) over >= 100 perturbations"};
  std::mt19937_64 rng(4242);
  int tested = 0;
  double worst_ratio = 0.0;
  for (int g = 0; g < 5; ++g) {
    GameSpec game = make_random_identical_interest_mpg(9500 + g, 2, 2, 2, 0.9);
    for (double sigma : {0.05, 0.15, 0.3}) {
      std::normal_distribution<double> noise(0.0, sigma);
      for (int rep = 0; rep < 7; ++rep) {
        ConditionedPolicy pi = random_policy(game, 0, rng);
        StatePolicy truth = random_marginal(2, 2, rng);
        std::vector<StatePolicy> marginals = {random_marginal(2, 2, rng),
                                              truth};
        OpponentModel exact = OpponentModel::uniform(game, 0);
        exact.set_modelee_policy(1, truth);

        StatePolicy perturbed = truth;
        for (int s = 0; s < 2; ++s) {
          for (int a = 0; a < 2; ++a)
            perturbed.at(s, a) *= std::exp(noise(rng));
          floor_and_normalize(perturbed.row(s));
        }
        OpponentModel model = OpponentModel::uniform(game, 0);
        model.set_modelee_policy(1, perturbed);

        double eps_rho = 0.0;
        for (int s = 0; s < 2; ++s)
          eps_rho = std::max(eps_rho, kl(perturbed.row(s), truth.row(s)));

        SoftQTable q_true = soft_policy_evaluation(
            game, 0, pi, exact, EvalMode::kOracleOpponent, &marginals, 1e-12);
        SoftQTable q_hat = soft_policy_evaluation(
            game, 0, pi, model, EvalMode::kModeledOpponent, nullptr, 1e-12);
        double max_diff = 0.0;
        for (size_t idx = 0; idx < q_true.q[0].size(); ++idx)
          max_diff = std::max(max_diff,
                              std::abs(q_true.q[0][idx] - q_hat.q[0][idx]));
        double bound = prop55_delta(game.gamma, game.n_actions[0], eps_rho);
        worst_ratio = std::max(worst_ratio, max_diff / bound);
        ACCEPT(criterion, max_diff <= bound);
        ++tested;
      }
    }
  }
  std::printf("    %d perturbations, worst |Q - Q^| / bound = %.4f\n", tested,
              worst_ratio);
  ACCEPT(criterion, tested >= 100);
}

TEST_CASE("criterion 7: zero-sum classics converge to uniform play") {
  Criterion criterion{7,
                      "matching pennies and RPS within TV 0.05 of uniform; "
                      "pennies value within 0.1 of zero"};
  VPGConfig config;
  config.max_iters = 3000;
  config.policy_tol = 1e-9;

  GameSpec mp = matching_pennies(0.9);
  VPGResult mp_result = solve_zero_sum(mp, config);
  ACCEPT(criterion, mp_result.converged);
  StatePolicy uniform2 = StatePolicy::uniform(1, 2);
  double mp_tv = std::max(mp_result.marginals[0].max_row_tv(uniform2),
                          mp_result.marginals[1].max_row_tv(uniform2));
  double mp_value = unregularized_values(mp, mp_result.marginals)[0];
  ACCEPT(criterion, mp_tv <= 0.05);
  ACCEPT(criterion, std::abs(mp_value) <= 0.1);

  GameSpec rps = rock_paper_scissors(0.9);
  VPGResult rps_result = solve_zero_sum(rps, config);
  ACCEPT(criterion, rps_result.converged);
  StatePolicy uniform3 = StatePolicy::uniform(1, 3);
  double rps_tv = std::max(rps_result.marginals[0].max_row_tv(uniform3),
                           rps_result.marginals[1].max_row_tv(uniform3));
  ACCEPT(criterion, rps_tv <= 0.05);
  std::printf("    pennies TV %.4f value %.4f; RPS TV %.4f\n", mp_tv, mp_value,
              rps_tv);
}

TEST_CASE("criterion 8: correlated solves reduce and correlate as designed") {
  Criterion criterion{8,
                      "|Omega|=1 equals the Nash solve within TV 1e-8; a "
                      "designed 2-signal device is non-product"};
  GameSpec game = game_of_chicken(0.9);
  VPGConfig config;
  config.max_iters = 2500;
  config.policy_tol = 1e-10;

  VPGResult nash = run_vpg(game, config);
  CEResult ce = solve_correlated(game, SignalScheme{{1.0}}, config);
  ACCEPT(criterion, nash.converged);
  ACCEPT(criterion, ce.vpg.converged);
  double reduction_tv = 0.0;
  for (int i = 0; i < 2; ++i) {
    reduction_tv = std::max(
        reduction_tv, nash.policies[i].max_row_tv(ce.vpg.policies[i]));
  }
  for (int a = 0; a < 4; ++a) {
    double product = nash.marginals[0].at(0, game.joints.own_action(0, a)) *
                     nash.marginals[1].at(0, game.joints.own_action(1, a));
    reduction_tv = std::max(reduction_tv, std::abs(ce.device[a] - product));
  }
  ACCEPT(criterion, reduction_tv <= 1e-8);
  for (double gap : ce.deviation_gaps) ACCEPT(criterion, gap >= -1e-9);

  // Designed signal: both agents follow a fair coin; the induced device is
  // half (0,0), half (1,1), which no product distribution matches.
  SignalScheme coin{{0.5, 0.5}};
  GameSpec augmented = augment_with_signal(game, coin);
  std::vector<ConditionedPolicy> follow;
  std::vector<OpponentModel> models;
  for (int i = 0; i < 2; ++i) {
    ConditionedPolicy pi(i, augmented.n_states, 2, 2);
    for (int w = 0; w < 2; ++w) {
      for (int o = 0; o < 2; ++o) pi.at(w, o, w) = 1.0;
    }
    follow.push_back(pi);
    models.push_back(OpponentModel::uniform(augmented, i));
  }
  std::vector<double> device =
      correlated_device(augmented, coin, follow, models);
  std::vector<double> m1(2, 0.0), m2(2, 0.0);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      m1[a] += device[game.joints.encode({a, b})];
      m2[b] += device[game.joints.encode({a, b})];
    }
  }
  double product_gap = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      product_gap = std::max(
          product_gap,
          std::abs(device[game.joints.encode({a, b})] - m1[a] * m2[b]));
    }
  }
  std::printf("    reduction TV %.2e; non-product deviation %.3f\n",
              reduction_tv, product_gap);
  ACCEPT(criterion, product_gap > 0.2);
}

TEST_CASE("criterion 9: mean-field solves converge as specified") {
  Criterion criterion{9,
                      "crowd toy converges (residual < 1e-6, <= 500 iters, "
                      "damping 0.5); L-independent in <= 2 iterations"};
  MFGameSpec crowd = crowd_line_toy(20, 2.0);
  MFConfig crowd_config;
  crowd_config.damping = 0.5;
  crowd_config.outer_iters = 500;
  crowd_config.residual_tol = 1e-6;
  MFResult crowd_result = run_mf_bayesian_q(crowd, crowd_config);
  ACCEPT(criterion, crowd_result.converged);
  ACCEPT(criterion, crowd_result.iterations <= 500);
  ACCEPT(criterion, crowd_result.residuals.back() < 1e-6);

  MFGameSpec indep = l_independent_toy(20);
  MFConfig indep_config;
  indep_config.damping = 0.0;
  indep_config.prior_mode = MFPriorMode::kFixedUniform;
  MFResult indep_result = run_mf_bayesian_q(indep, indep_config);
  ACCEPT(criterion, indep_result.converged);
  ACCEPT(criterion, indep_result.iterations <= 2);
  // The fixed point is the single-agent soft optimum: one more optimal
  // backward pass reproduces it exactly.
  std::vector<StatePolicy> uniform(21, StatePolicy::uniform(2, 2));
  MFBackwardResult backward =
      soft_q_backward_opt(indep, indep_result.mean_field, uniform);
  double fixed_point_tv = 0.0;
  for (int t = 0; t <= 20; ++t)
    fixed_point_tv = std::max(
        fixed_point_tv, indep_result.policy[t].max_row_tv(backward.policy[t]));
  ACCEPT(criterion, fixed_point_tv < 1e-12);
  std::printf("    crowd iterations %d (residual %.2e); independent "
              "iterations %d\n",
              crowd_result.iterations, crowd_result.residuals.back(),
              indep_result.iterations);
}

TEST_CASE("criterion 10: opponent modeling recovers a stationary opponent") {
  Criterion criterion{10,
                      "fitted model within TV 0.1 of the true policy from "
                      "500 trajectories and 200 sweeps"};
  GameSpec game = make_matrix_game(
      {{0.4, 0.1, 0.0, 0.3}, {1.4, 1.4, 0.0, 0.0}}, {2, 2}, 0.9);
  std::mt19937_64 rng(7);
  std::vector<StatePolicy> play = {StatePolicy::uniform(1, 2),
                                   StatePolicy::uniform(1, 2)};
  play[1].at(0, 0) = 0.8;
  play[1].at(0, 1) = 0.2;
  TrajectoryBuffer buffer(100000);
  for (int e = 0; e < 500; ++e)
    buffer.push(simulate_episode(game, play, 1, rng));  // 500 trajectories

  OmConfig config;
  config.step = 0.5;
  config.inner_iters = 200;
  std::vector<StatePolicy> rho_all = {play[0], StatePolicy::uniform(1, 2)};
  std::mt19937_64 fit_rng(13);
  FitResult fit = fit_opponent_model(game, buffer, 1, rho_all,
                                     RewardEstimate(1, 4), config, fit_rng);
  double err = tv(fit.rho_j.row(0), play[1].row(0));
  std::printf("    fitted model TV from truth %.4f\n", err);
  ACCEPT(criterion, err <= 0.1);
}

TEST_CASE("criterion 11: numerical equivalences and property suites") {
  Criterion criterion{11,
                      "DP matches Monte-Carlo (3 sigma) and exhaustive "
                      "enumeration; property suites pass with >= 1e3 cases"};
  std::mt19937_64 rng(31337);

  struct Fixture {
    const char* name;
    GameSpec game;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({"pd", prisoners_dilemma(0.8)});
  fixtures.push_back({"mp", matching_pennies(0.8)});
  fixtures.push_back({"rps", rock_paper_scissors(0.8)});
  fixtures.push_back({"chicken", game_of_chicken(0.8)});
  fixtures.push_back(
      {"random-mpg", make_random_identical_interest_mpg(9700, 2, 2, 2, 0.8)});
  fixtures.push_back(
      {"random", make_random_general_sum(9800, 2, 2, 2, 0.8)});

  for (Fixture& fixture : fixtures) {
    GameSpec& game = fixture.game;
    ConditionedPolicy pi = random_policy(game, 0, rng);
    OpponentModel rho = OpponentModel::uniform(game, 0);
    StatePolicy skew = random_marginal(game.n_states, game.n_actions[1], rng);
    rho.set_modelee_policy(1, skew);
    std::vector<StatePolicy> marginals;
    for (int j = 0; j < 2; ++j)
      marginals.push_back(
          random_marginal(game.n_states, game.n_actions[j], rng));

    // Monte-Carlo agreement at 3 standard errors (discounted).
    double dp = elbo(game, 0, pi, rho, EvalMode::kOracleOpponent, &marginals,
                     1e-12);
    testing::McEstimate mc = testing::mc_soft_return(
        game, 0, pi, rho, &marginals, 200000, 1e-10, rng);
    ACCEPT(criterion, std::abs(dp - mc.mean) <= 3.0 * mc.std_error);

    // Exhaustive enumeration agreement at horizon 3 (undiscounted).
    GameSpec finite = game;
    finite.horizon = Horizon::finite(3);
    double dp_finite =
        elbo(finite, 0, pi, rho, EvalMode::kOracleOpponent, &marginals);
    double brute =
        testing::enumerate_soft_return(finite, 0, pi, rho, &marginals);
    ACCEPT(criterion, std::abs(dp_finite - brute) <= 1e-9);
  }

  // Property suite: NPG simplex preservation.
  {
    GameSpec game = matching_pennies(0.5);
    std::uniform_real_distribution<double> score(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.05, 0.5);
    bool all_valid = true;
    for (int rep = 0; rep < 1000; ++rep) {
      ConditionedPolicy pi = random_policy(game, 0, rng);
      SoftQTable q;
      q.agent = 0;
      q.q = {{score(rng), score(rng), score(rng), score(rng)}};
      q.v = {{0.0}};
      ConditionedPolicy next = npg_step(game, pi, q, unit(rng), 0.5);
      all_valid = all_valid && next.is_valid(1e-9);
    }
    ACCEPT(criterion, all_valid);
  }

  // Property suite: softmax shift invariance.
  {
    std::uniform_real_distribution<double> score(-5.0, 5.0);
    bool all_close = true;
    for (int rep = 0; rep < 1000; ++rep) {
      std::vector<double> a(4), b(4);
      double c = score(rng);
      for (int k = 0; k < 4; ++k) {
        a[k] = score(rng);
        b[k] = a[k] + c;
      }
      softmax_inplace(a);
      softmax_inplace(b);
      all_close = all_close && tv(a, b) < 1e-12;
    }
    ACCEPT(criterion, all_close);
  }

  // Property suite: Pinsker's inequality.
  {
    bool all_hold = true;
    for (int rep = 0; rep < 1000; ++rep) {
      int k = 2 + static_cast<int>(rng() % 4);
      StatePolicy p = random_marginal(1, k, rng);
      StatePolicy q = random_marginal(1, k, rng);
      all_hold = all_hold &&
                 tv(p.row(0), q.row(0)) <=
                     std::sqrt(0.5 * kl(p.row(0), q.row(0))) + 1e-12;
    }
    ACCEPT(criterion, all_hold);
  }

  // Property suite: Kolmogorov mass conservation.
  {
    MFGameSpec toy = crowd_line_toy(5, 1.0);
    bool all_conserve = true;
    for (int rep = 0; rep < 1000; ++rep) {
      StatePolicy pi = random_marginal(3, 3, rng);
      StatePolicy l_policy = random_marginal(3, 3, rng);
      std::vector<double> l_prev(9);
      for (int s = 0; s < 3; ++s) {
        for (int a = 0; a < 3; ++a)
          l_prev[s * 3 + a] = l_policy.at(s, a) / 3.0;
      }
      std::vector<double> l = kolmogorov_step(toy, l_prev, pi);
      double mass = 0.0;
      bool nonneg = true;
      for (double x : l) {
        mass += x;
        nonneg = nonneg && x >= 0.0;
      }
      all_conserve = all_conserve && nonneg && std::abs(mass - 1.0) < 1e-10;
    }
    ACCEPT(criterion, all_conserve);
  }
}

}  // namespace
}  // namespace vsg
