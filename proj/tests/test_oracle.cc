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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "vsg/check.h"
#include "vsg/distributions.h"
#include "vsg/generators.h"
#include "vsg/soft_eval.h"
#include "vsg/vpg.h"

namespace vsg {
namespace {

std::vector<StatePolicy> uniform_marginals(const GameSpec& game) {
  std::vector<StatePolicy> m;
  for (int i = 0; i < game.n_agents; ++i)
    m.push_back(StatePolicy::uniform(game.n_states, game.n_actions[i]));
  return m;
}

TEST_CASE("best response against any opponent in the dilemma is defection") {
  GameSpec game = prisoners_dilemma(0.9);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<StatePolicy> marginals = uniform_marginals(game);
    double p = unit(rng);
    marginals[1].at(0, 0) = p;
    marginals[1].at(0, 1) = 1.0 - p;
    BestResponse br = exact_best_response(game, 0, marginals);
    CHECK(br.actions[0] == 1);
  }
}

TEST_CASE("opponent-independent rewards reduce to a single-agent optimum") {
  // Reward of agent 0 ignores agent 1; the best response must match the
  // best deterministic stationary policy found by exhaustive enumeration.
  GameSpec game = make_random_general_sum(71, 2, 2, 2, 0.85);
  for (int s = 0; s < 2; ++s) {
    for (int a0 = 0; a0 < 2; ++a0) {
      double r = game.r(0, s, game.joints.encode({a0, 0}));
      game.r(0, s, game.joints.encode({a0, 1})) = r;
    }
  }
  std::vector<StatePolicy> marginals = uniform_marginals(game);
  BestResponse br = exact_best_response(game, 0, marginals);
  double br_value = 0.0;
  for (int s = 0; s < 2; ++s) br_value += game.initial[s] * br.value[s];

  double best_enumerated = -1e18;
  for (int p0 = 0; p0 < 2; ++p0) {
    for (int p1 = 0; p1 < 2; ++p1) {
      std::vector<StatePolicy> m = marginals;
      m[0].at(0, p0) = 1.0;
      m[0].at(0, 1 - p0) = 0.0;
      m[0].at(1, p1) = 1.0;
      m[0].at(1, 1 - p1) = 0.0;
      best_enumerated =
          std::max(best_enumerated, unregularized_values(game, m)[0]);
    }
  }
  CHECK(br_value == doctest::Approx(best_enumerated).epsilon(1e-9));
}

TEST_CASE("zero rewards give zero value and lowest-index tie break") {
  GameSpec game = make_matrix_game({{0, 0, 0, 0}, {0, 0, 0, 0}}, {2, 2}, 0.9);
  std::vector<StatePolicy> marginals = uniform_marginals(game);
  BestResponse br = exact_best_response(game, 0, marginals);
  CHECK(br.value[0] == doctest::Approx(0.0));
  CHECK(br.actions[0] == 0);
}

TEST_CASE("uniform play is unexploitable in matching pennies") {
  GameSpec game = matching_pennies(0.9);
  ExploitabilityReport report =
      exploitability(game, uniform_marginals(game));
  CHECK(report.max_gap <= 1e-9);
  CHECK(report.max_gap >= -1e-9);
}

TEST_CASE("absorbing-transform values match the discounted originals") {
  GameSpec game = prisoners_dilemma(0.9);
  GameSpec absorbed = absorbing_transform(game, 0.9);
  std::vector<StatePolicy> m = uniform_marginals(game);
  std::vector<StatePolicy> m_abs = uniform_marginals(absorbed);
  std::vector<double> discounted = unregularized_values(game, m);
  std::vector<double> undiscounted = unregularized_values(absorbed, m_abs);
  for (int i = 0; i < 2; ++i)
    CHECK(undiscounted[i] == doctest::Approx(discounted[i]).epsilon(1e-10));
  // The exploitability gaps agree as well.
  ExploitabilityReport a = exploitability(game, m);
  ExploitabilityReport b = exploitability(absorbed, m_abs);
  CHECK(a.max_gap == doctest::Approx(b.max_gap).epsilon(1e-8));
}

TEST_CASE("both-cooperate gap in the one-shot dilemma is T - R") {
  GameSpec game = prisoners_dilemma(0.0);  // gamma = 0: single-shot lift
  std::vector<StatePolicy> coop = uniform_marginals(game);
  for (int i = 0; i < 2; ++i) {
    coop[i].at(0, 0) = 1.0;
    coop[i].at(0, 1) = 0.0;
  }
  ExploitabilityReport report = exploitability(game, coop);
  CHECK(report.gaps[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.gaps[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("random policies are never negatively exploitable") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    GameSpec game = make_random_general_sum(300 + rep, 2, 2, 2, 0.85);
    std::vector<StatePolicy> m = uniform_marginals(game);
    for (int i = 0; i < 2; ++i) {
      for (int s = 0; s < 2; ++s) {
        double a = unit(rng), b = unit(rng);
        m[i].at(s, 0) = a / (a + b);
        m[i].at(s, 1) = b / (a + b);
      }
    }
    ExploitabilityReport report = exploitability(game, m);
    for (double gap : report.gaps) CHECK(gap >= -1e-9);
  }
}

TEST_CASE("support-enumeration equilibria of 2x2 lifts are unexploitable") {
  // Matching pennies (mixed NE) plus a dominance-solvable game (pure NE).
  struct Fixture {
    std::array<double, 4> r1, r2;
  };
  std::vector<Fixture> fixtures = {
      {{1, -1, -1, 1}, {-1, 1, 1, -1}},
      {{3, 0, 5, 1}, {3, 5, 0, 1}},
      {{2, -1, 0.5, 1.25}, {1, 0.25, -0.5, 2}},
  };
  for (const Fixture& f : fixtures) {
    testing::MixedNE ne = testing::support_enumeration_2x2(f.r1, f.r2);
    GameSpec game = make_matrix_game(
        {{f.r1.begin(), f.r1.end()}, {f.r2.begin(), f.r2.end()}}, {2, 2},
        0.7);
    std::vector<StatePolicy> m = uniform_marginals(game);
    m[0].at(0, 0) = ne.p[0];
    m[0].at(0, 1) = ne.p[1];
    m[1].at(0, 0) = ne.q[0];
    m[1].at(0, 1) = ne.q[1];
    ExploitabilityReport report = exploitability(game, m);
    CHECK(report.max_gap <= 1e-9);
  }
}

TEST_CASE("certification bound arithmetic") {
  GameSpec finite = prisoners_dilemma(0.9);
  finite.horizon = Horizon::finite(10);
  finite.n_actions = {3, 3};  // only max |A_i| enters the bound
  ExploitabilityReport report;
  report.gaps = {0.5, 0.5};
  report.max_gap = 0.5;
  Certification cert =
      certify_eps_nash(report, finite, BoundKind::kThm42, 0.0);
  CHECK(cert.bound == doctest::Approx(10.0 * std::log(3.0)).epsilon(1e-12));
  CHECK(cert.pass);

  GameSpec discounted = make_matrix_game({{0, 0, 0, 0}, {0, 0, 0, 0}}, {2, 2},
                                         0.9);
  Certification joint =
      certify_eps_nash(report, discounted, BoundKind::kThm58Joint, 0.0);
  CHECK(joint.bound == doctest::Approx(std::log(4.0) / 0.1).epsilon(1e-9));
  Certification maxed =
      certify_eps_nash(report, discounted, BoundKind::kThm58Max, 1.0);
  CHECK(maxed.bound == doctest::Approx(1.0 + std::log(2.0) / 0.1).epsilon(1e-9));

  // Horizon/bound mismatches are parameter errors.
  CHECK_THROWS_AS(certify_eps_nash(report, discounted, BoundKind::kThm42, 0.0),
                  ParameterError);
  CHECK_THROWS_AS(
      certify_eps_nash(report, finite, BoundKind::kThm58Joint, 0.0),
      ParameterError);
}

TEST_CASE("model-error bound arithmetic") {
  double delta = prop55_delta(0.9, 2, 0.02);
  double expected = 2.0 * (1.0 + std::log(2.0)) / 0.01 * std::sqrt(0.01) +
                    0.02 / 0.1;
  CHECK(delta == doctest::Approx(expected).epsilon(1e-12));
  CHECK(delta == doctest::Approx(34.06).epsilon(1e-3));
}

TEST_CASE("soft nash residual is zero for uniform play on zero rewards") {
  GameSpec game = make_matrix_game({{0, 0, 0, 0}, {0, 0, 0, 0}}, {2, 2}, 0.5);
  std::vector<ConditionedPolicy> policies = {
      ConditionedPolicy::uniform(game, 0), ConditionedPolicy::uniform(game, 1)};
  std::vector<OpponentModel> models = {OpponentModel::uniform(game, 0),
                                       OpponentModel::uniform(game, 1)};
  double residual = soft_nash_residual(game, policies, models);
  CHECK(residual == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("soft nash residual of a converged run is tiny and bounded") {
  GameSpec game = make_random_identical_interest_mpg(17, 2, 2, 2, 0.9);
  VPGConfig config;
  config.max_iters = 5000;
  config.policy_tol = 1e-9;
  VPGResult r = run_vpg(game, config);
  REQUIRE(r.converged);
  double residual = soft_nash_residual(game, r.policies, r.models);
  CHECK(residual < 10 * 1e-9 * 1e3);  // loose upper guard
  CHECK(residual >= 0.0);
  CHECK(residual <= 1.0);
  // Tighter: the residual tracks the convergence tolerance.
  CHECK(residual < 1e-5);
}

TEST_CASE("subjective objective agrees with the fixed-point evaluator") {
  GameSpec game = make_random_identical_interest_mpg(19, 2, 2, 2, 0.9);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  ConditionedPolicy pi = ConditionedPolicy::uniform(game, 0);
  for (int s = 0; s < 2; ++s) {
    for (int o = 0; o < 2; ++o) {
      double a = unit(rng), b = unit(rng);
      pi.at(s, o, 0) = a / (a + b);
      pi.at(s, o, 1) = b / (a + b);
    }
  }
  OpponentModel rho = OpponentModel::uniform(game, 0);
  double linear = subjective_elbo(game, 0, pi, rho);
  double fixed_point =
      elbo(game, 0, pi, rho, EvalMode::kModeledOpponent, nullptr, 1e-12);
  CHECK(linear == doctest::Approx(fixed_point).epsilon(1e-9));
}

TEST_CASE("coupled visitation matches a truncated series") {
  GameSpec game = make_random_identical_interest_mpg(23, 2, 2, 2, 0.9);
  ConditionedPolicy pi = ConditionedPolicy::uniform(game, 0);
  OpponentModel rho = OpponentModel::uniform(game, 0);
  std::vector<double> d = coupled_visitation(game, 0, pi, rho);
  // Uniform conditional policy: the coupled flow equals the product flow.
  std::vector<double> series =
      testing::truncated_visitation(game, uniform_marginals(game), 2000);
  CHECK(d[0] == doctest::Approx(series[0]).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(series[1]).epsilon(1e-9));
}

TEST_CASE("fisher cross-agent blocks vanish") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    GameSpec game =
        make_random_identical_interest_mpg(400 + rep, 2, 2, 2, 0.9);
    std::vector<ConditionedPolicy> policies;
    for (int i = 0; i < 2; ++i) {
      ConditionedPolicy pi = ConditionedPolicy::uniform(game, i);
      for (int s = 0; s < 2; ++s) {
        for (int o = 0; o < 2; ++o) {
          double a = unit(rng), b = unit(rng);
          pi.at(s, o, 0) = a / (a + b);
          pi.at(s, o, 1) = b / (a + b);
        }
      }
      policies.push_back(pi);
    }
    std::vector<OpponentModel> models = {OpponentModel::uniform(game, 0),
                                         OpponentModel::uniform(game, 1)};
    auto fishers = per_state_joint_fisher(game, policies, models);
    CHECK(max_cross_agent_fisher_entry(game, fishers) <= 1e-8);
  }
}

TEST_CASE("reference step reproduces the closed-form npg round") {
  for (int rep = 0; rep < 5; ++rep) {
    GameSpec game =
        make_random_identical_interest_mpg(500 + rep, 2, 2, 2, 0.9);
    std::vector<ConditionedPolicy> policies = {
        ConditionedPolicy::uniform(game, 0),
        ConditionedPolicy::uniform(game, 1)};
    std::vector<OpponentModel> models = {OpponentModel::uniform(game, 0),
                                         OpponentModel::uniform(game, 1)};
    const double eta = 0.05;
    std::vector<ConditionedPolicy> reference =
        global_npg_reference_step(game, policies, models, eta);
    for (int i = 0; i < 2; ++i) {
      SoftQTable q = soft_policy_evaluation(game, i, policies[i], models[i],
                                            EvalMode::kModeledOpponent,
                                            nullptr, 1e-13);
      ConditionedPolicy closed = npg_step(game, policies[i], q, eta,
                                          game.gamma);
      CHECK(closed.max_row_tv(reference[i]) < 1e-6);
    }
  }
}

TEST_CASE("reference step with zero eta leaves the policy unchanged") {
  GameSpec game = make_random_identical_interest_mpg(61, 2, 2, 2, 0.9);
  std::vector<ConditionedPolicy> policies = {
      ConditionedPolicy::uniform(game, 0), ConditionedPolicy::uniform(game, 1)};
  std::vector<OpponentModel> models = {OpponentModel::uniform(game, 0),
                                       OpponentModel::uniform(game, 1)};
  std::vector<ConditionedPolicy> reference =
      global_npg_reference_step(game, policies, models, 0.0);
  for (int i = 0; i < 2; ++i)
    CHECK(policies[i].max_row_tv(reference[i]) < 1e-12);
}

TEST_CASE("an absurd cutoff leaves no usable fisher directions") {
  GameSpec game = make_random_identical_interest_mpg(67, 2, 2, 2, 0.9);
  std::vector<ConditionedPolicy> policies = {
      ConditionedPolicy::uniform(game, 0), ConditionedPolicy::uniform(game, 1)};
  std::vector<OpponentModel> models = {OpponentModel::uniform(game, 0),
                                       OpponentModel::uniform(game, 1)};
  CHECK_THROWS_AS(
      global_npg_reference_step(game, policies, models, 0.05, 1e-5, 1e6),
      DegenerateFisherError);
}

}  // namespace
}  // namespace vsg
