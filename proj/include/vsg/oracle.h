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

#ifndef VSG_ORACLE_H_
#define VSG_ORACLE_H_

#include <Eigen/Dense>
#include <vector>

#include "vsg/game.h"
#include "vsg/policy.h"

namespace vsg {

// Reference computations kept deliberately independent of the solver path:
// direct linear solves and backward induction instead of the solvers'
// fixed-point iterations, at one order stricter tolerance.

struct BestResponse {
  // actions[t * n_states + s] for finite horizons, actions[s] otherwise.
  std::vector<int> actions;
  std::vector<double> value;  // V(s) at the initial epoch
  bool time_indexed = false;
};

// Unregularized optimal deterministic policy of one agent against frozen
// opponent marginals. Ties break toward the lowest action index. Value
// iteration to 1e-12 for discounted games, backward induction (undiscounted)
// for finite horizons.
BestResponse exact_best_response(const GameSpec& game, int agent,
                                 const std::vector<StatePolicy>& opponents);

// Unregularized expected return of the product play, one entry per agent.
std::vector<double> unregularized_values(
    const GameSpec& game, const std::vector<StatePolicy>& marginals);

struct ExploitabilityReport {
  std::vector<double> gaps;  // best-response value minus achieved, per agent
  double max_gap = 0.0;
};

ExploitabilityReport exploitability(const GameSpec& game,
                                    const std::vector<StatePolicy>& marginals);

// Finite-horizon variant against time-indexed play: marginals_t[t][agent].
// Best responses may be time-indexed as well.
ExploitabilityReport exploitability_time_indexed(
    const GameSpec& game,
    const std::vector<std::vector<StatePolicy>>& marginals_t);

enum class BoundKind { kThm42, kThm58Joint, kThm58Max };

std::string to_string(BoundKind kind);

struct Certification {
  BoundKind kind;
  double bound = 0.0;
  double delta = 0.0;
  double max_gap = 0.0;
  bool pass = false;
};

// kThm42: bound = T log max_i |A_i| (finite horizon only).
// kThm58Joint: bound = delta + log prod_i |A_i| / (1 - gamma).
// kThm58Max: bound = delta + log max_i |A_i| / (1 - gamma).
Certification certify_eps_nash(const ExploitabilityReport& report,
                               const GameSpec& game, BoundKind kind,
                               double delta = 0.0);

// delta = 2 (1 + log |A_i|) / (1-gamma)^2 sqrt(eps_rho / 2)
//         + eps_rho / (1-gamma).
double prop55_delta(double gamma, int n_actions_i, double eps_rho);

// Max over agents of the sup-row TV between pi_i and the soft best response
// to its own evaluation; zero exactly at a soft equilibrium.
double soft_nash_residual(const GameSpec& game,
                          const std::vector<ConditionedPolicy>& policies,
                          const std::vector<OpponentModel>& models,
                          double eval_tol = 1e-10);

// Discounted state visitation of agent i's subjective play (a^{-i} from its
// model, a^i from its conditional policy), by direct linear solve.
std::vector<double> coupled_visitation(const GameSpec& game, int agent,
                                       const ConditionedPolicy& pi,
                                       const OpponentModel& rho);

// Agent i's regularized objective under the same subjective play, evaluated
// by direct linear solve (reward plus own conditional entropy per step).
double subjective_elbo(const GameSpec& game, int agent,
                       const ConditionedPolicy& pi, const OpponentModel& rho);

// One global natural-gradient step on the softmax logits of every agent:
// central finite differences of the subjective objective, the exact Fisher
// of the conditional policies weighted by the coupled visitation, and its
// eigendecomposition pseudo-inverse (eigenvalues below `cutoff` dropped).
// Agreement with the closed-form per-agent update is the equivalence check.
std::vector<ConditionedPolicy> global_npg_reference_step(
    const GameSpec& game, const std::vector<ConditionedPolicy>& policies,
    const std::vector<OpponentModel>& models, double eta,
    double fd_step = 1e-5, double cutoff = 1e-8);

// Per-state Fisher matrix of the product-of-marginals joint policy with
// respect to the stacked conditional logits of every agent. Blocks couple
// agents only through the expectation; the cross-agent blocks vanish.
std::vector<Eigen::MatrixXd> per_state_joint_fisher(
    const GameSpec& game, const std::vector<ConditionedPolicy>& policies,
    const std::vector<OpponentModel>& models);

// Max |entry| over the cross-agent blocks of the matrices above.
double max_cross_agent_fisher_entry(
    const GameSpec& game, const std::vector<Eigen::MatrixXd>& fishers);

}  // namespace vsg

#endif  // VSG_ORACLE_H_
