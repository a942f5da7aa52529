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

#include "vsg/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "vsg/check.h"
#include "vsg/equilibria_ext.h"
#include "vsg/generators.h"
#include "vsg/mean_field.h"
#include "vsg/oracle.h"
#include "vsg/vpg.h"

namespace vsg {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write file: " + path);
  return out;
}

double max_abs_reward(const GameSpec& game) {
  double m = 0.0;
  for (double r : game.reward) m = std::max(m, std::abs(r));
  return m;
}

std::string command_name(Command command) {
  switch (command) {
    case Command::kSolveNash:
      return "solve-nash";
    case Command::kSolveZs:
      return "solve-zs";
    case Command::kSolveCe:
      return "solve-ce";
    case Command::kSolveMf:
      return "solve-mf";
    case Command::kExploitability:
      return "exploitability";
    case Command::kGenGame:
      return "gen-game";
    case Command::kCertify:
      return "certify";
  }
  return "unknown";
}

void write_config_echo(const RunConfig& config, const std::string& run_id,
                       std::vector<std::string>* files) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["run_id"] = run_id;
  j["command"] = command_name(config.command);
  j["game"] = config.game_path;
  j["out"] = config.out_dir;
  j["seed"] = config.seed;
  j["eta"] = config.eta;
  j["iters"] = config.iters;
  j["tol"] = config.tol;
  j["opponent_mode"] = config.opponent_mode;
  j["damping"] = config.damping;
  j["mf_prior"] = config.mf_prior;
  j["signal"] = config.signal_path;
  j["cadence"] = config.cadence;
  j["policy"] = config.policy;
  j["bound"] = config.bound;
  j["delta"] = config.delta;
  std::string path = join_path(config.out_dir, "config_echo.json");
  open_out(path) << j.dump(2) << "\n";
  files->push_back(path);
}

void write_trace_csv(const std::string& path, const std::string& run_id,
                     const std::vector<VPGTraceRow>& trace,
                     std::vector<std::string>* files) {
  std::ofstream out = open_out(path);
  out << "run_id,iter,agent,elbo,value,potential,policy_tv_delta,"
         "exploitability_if_computed\n";
  for (const VPGTraceRow& row : trace) {
    for (size_t i = 0; i < row.elbo.size(); ++i) {
      out << run_id << "," << row.iter << "," << i << ","
          << format_double(row.elbo[i]) << "," << format_double(row.value[i])
          << "," << format_double(row.potential) << ","
          << format_double(row.tv_delta) << ",";
      if (row.has_exploitability) out << format_double(row.exploitability);
      out << "\n";
    }
  }
  files->push_back(path);
}

void write_policies_csv(const std::string& path,
                        const std::vector<ConditionedPolicy>& policies,
                        std::vector<std::string>* files) {
  std::ofstream out = open_out(path);
  out << "agent,state,opp,action,prob\n";
  for (const ConditionedPolicy& pi : policies) {
    for (int s = 0; s < pi.n_states(); ++s) {
      for (int o = 0; o < pi.n_opponent(); ++o) {
        for (int a = 0; a < pi.n_own(); ++a) {
          out << pi.agent() << "," << s << "," << o << "," << a << ","
              << format_double(pi.at(s, o, a)) << "\n";
        }
      }
    }
  }
  files->push_back(path);
}

void write_models_csv(const std::string& path,
                      const std::vector<OpponentModel>& models,
                      std::vector<std::string>* files) {
  std::ofstream out = open_out(path);
  out << "modeler,modelee,state,action,prob\n";
  for (const OpponentModel& model : models) {
    for (int j : model.modelees()) {
      const StatePolicy& rho = model.modelee_policy(j);
      for (int s = 0; s < rho.n_states; ++s) {
        for (int a = 0; a < rho.n_actions; ++a) {
          out << model.modeler() << "," << j << "," << s << "," << a << ","
              << format_double(rho.at(s, a)) << "\n";
        }
      }
    }
  }
  files->push_back(path);
}

void write_report_csv(const std::string& path, const GameSpec& game,
                      const ExploitabilityReport& report,
                      const std::vector<Certification>& certs,
                      std::vector<std::string>* files) {
  std::ofstream out = open_out(path);
  out << "agent,gap,bound_kind,bound,pass\n";
  for (size_t i = 0; i < report.gaps.size(); ++i) {
    if (certs.empty()) {
      out << i << "," << format_double(report.gaps[i])
          << ",not-applicable,,skipped\n";
      continue;
    }
    for (const Certification& cert : certs) {
      out << i << "," << format_double(report.gaps[i]) << ","
          << to_string(cert.kind) << "," << format_double(cert.bound) << ","
          << (cert.pass ? "pass" : "fail") << "\n";
    }
  }
  (void)game;
  files->push_back(path);
}

SignalScheme load_scheme(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open signal file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    SignalScheme scheme;
    scheme.sigma = j.at("sigma").get<std::vector<double>>();
    return scheme;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("signal file: ") + e.what());
  }
}

std::vector<Certification> standard_certifications(
    const GameSpec& game, const ExploitabilityReport& report, double delta) {
  // The model-error term presumes |r| <= 1; with a nonzero delta on an
  // unnormalized game, certification is skipped and reported as not
  // applicable. The pure entropy bounds hold for any reward scale.
  if (delta > 0.0 && max_abs_reward(game) > 1.0 + 1e-12) return {};
  std::vector<Certification> certs;
  if (game.horizon.is_finite) {
    certs.push_back(certify_eps_nash(report, game, BoundKind::kThm42, 0.0));
  } else {
    certs.push_back(
        certify_eps_nash(report, game, BoundKind::kThm58Joint, delta));
    certs.push_back(
        certify_eps_nash(report, game, BoundKind::kThm58Max, delta));
  }
  return certs;
}

GameSpec generate_named_game(const RunConfig& config) {
  const std::string& name = config.gen_name;
  if (name == "pd") return prisoners_dilemma(config.gen_gamma);
  if (name == "mp") return matching_pennies(config.gen_gamma);
  if (name == "rps") return rock_paper_scissors(config.gen_gamma);
  if (name == "chicken") return game_of_chicken(config.gen_gamma);
  if (name == "diffgame")
    return make_differential_game(41, config.gen_gamma);
  if (name == "random-mpg")
    return make_random_identical_interest_mpg(config.seed, config.gen_agents,
                                              config.gen_states,
                                              config.gen_actions,
                                              config.gen_gamma);
  if (name == "random")
    return make_random_general_sum(config.seed, config.gen_agents,
                                   config.gen_states, config.gen_actions,
                                   config.gen_gamma);
  throw ParameterError("gen-game: unknown generator: " + name);
}

MFGameSpec load_mf_game(const std::string& path, int* horizon_out) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open game file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    std::string kind = j.at("mf").get<std::string>();
    int horizon = j.value("horizon", 20);
    double weight = j.value("weight", 0.0);
    *horizon_out = horizon;
    if (kind == "crowd") {
      return crowd_aversion_toy(horizon, weight > 0 ? weight : 8.0);
    }
    if (kind == "crowd-line") {
      return crowd_line_toy(horizon, weight > 0 ? weight : 2.0);
    }
    if (kind == "independent") return l_independent_toy(horizon);
    throw ParameterError("solve-mf: unknown mean-field game: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("mean-field game file: ") + e.what());
  }
}

VPGConfig vpg_config_from(const RunConfig& config) {
  VPGConfig vc;
  vc.eta = config.eta;
  vc.max_iters = config.iters;
  vc.policy_tol = config.tol;
  vc.seed = config.seed;
  if (config.opponent_mode == "oracle") {
    vc.opponent_mode = OpponentMode::kOracle;
  } else if (config.opponent_mode == "empirical") {
    vc.opponent_mode = OpponentMode::kEmpirical;
  } else if (config.opponent_mode == "variational") {
    vc.opponent_mode = OpponentMode::kVariational;
  } else {
    throw ParameterError("unknown opponent mode: " + config.opponent_mode);
  }
  vc.metric_cadence = config.cadence;
  vc.exploit_metric = [](const GameSpec& g,
                         const std::vector<StatePolicy>& marginals) {
    return exploitability(g, marginals).max_gap;
  };
  return vc;
}

int solve_stochastic(const RunConfig& config, const std::string& run_id,
                     std::vector<std::string>* files) {
  GameSpec game = load_game(config.game_path);
  std::vector<std::string> violations = validate(game);
  if (!violations.empty()) return 2;

  if (game.horizon.is_finite) {
    // Finite horizons use damped soft best-response rounds.
    FiniteSoftResult result =
        solve_finite_horizon_soft(game, 0.5, config.tol, config.iters);
    std::ofstream out =
        open_out(join_path(config.out_dir, "final_policy.csv"));
    out << "agent,t,state,opp,action,prob\n";
    for (int i = 0; i < game.n_agents; ++i) {
      for (int t = 0; t < game.horizon.steps; ++t) {
        const ConditionedPolicy& pi = result.policies[i][t];
        for (int s = 0; s < pi.n_states(); ++s) {
          for (int o = 0; o < pi.n_opponent(); ++o) {
            for (int a = 0; a < pi.n_own(); ++a) {
              out << i << "," << t << "," << s << "," << o << "," << a << ","
                  << format_double(pi.at(s, o, a)) << "\n";
            }
          }
        }
      }
    }
    files->push_back(join_path(config.out_dir, "final_policy.csv"));
    // Certify against the exact per-epoch best response.
    ExploitabilityReport report =
        exploitability_time_indexed(game, result.marginals);
    write_report_csv(join_path(config.out_dir, "report.csv"), game, report,
                     standard_certifications(game, report, 0.0), files);
    return result.converged ? 0 : 3;
  }

  VPGConfig vc = vpg_config_from(config);
  VPGResult result = config.command == Command::kSolveZs
                         ? solve_zero_sum(game, vc)
                         : run_vpg(game, vc);
  write_trace_csv(join_path(config.out_dir, "trace.csv"), run_id,
                  result.trace, files);
  write_policies_csv(join_path(config.out_dir, "final_policy.csv"),
                     result.policies, files);
  write_models_csv(join_path(config.out_dir, "models.csv"), result.models,
                   files);
  ExploitabilityReport report = exploitability(game, result.marginals);
  write_report_csv(join_path(config.out_dir, "report.csv"), game, report,
                   standard_certifications(game, report, 0.0), files);
  return result.converged ? 0 : 3;
}

int solve_ce(const RunConfig& config, const std::string& run_id,
             std::vector<std::string>* files) {
  GameSpec game = load_game(config.game_path);
  if (!validate(game).empty()) return 2;
  SignalScheme scheme;
  if (config.signal_path.empty()) {
    scheme.sigma = {1.0};
  } else {
    scheme = load_scheme(config.signal_path);
  }
  CEResult result = solve_correlated(game, scheme, vpg_config_from(config));
  write_trace_csv(join_path(config.out_dir, "trace.csv"), run_id,
                  result.vpg.trace, files);
  const int n_joint = game.joints.size();
  std::ofstream out = open_out(join_path(config.out_dir, "device.csv"));
  out << "state,joint_action,mass\n";
  for (int s = 0; s < game.n_states; ++s) {
    for (int a = 0; a < n_joint; ++a) {
      out << s << "," << a << ","
          << format_double(result.device[static_cast<size_t>(s) * n_joint + a])
          << "\n";
    }
  }
  files->push_back(join_path(config.out_dir, "device.csv"));
  ExploitabilityReport report;
  report.gaps = result.deviation_gaps;
  report.max_gap =
      *std::max_element(report.gaps.begin(), report.gaps.end());
  write_report_csv(join_path(config.out_dir, "report.csv"), result.augmented,
                   report,
                   standard_certifications(result.augmented, report, 0.0),
                   files);
  return result.vpg.converged ? 0 : 3;
}

int solve_mf(const RunConfig& config, const std::string& run_id,
             std::vector<std::string>* files) {
  int horizon = 0;
  MFGameSpec mf_game = load_mf_game(config.game_path, &horizon);
  MFConfig mc;
  mc.outer_iters = static_cast<int>(config.iters);
  mc.residual_tol = config.tol;
  mc.damping = config.damping;
  mc.prior_mode = config.mf_prior == "uniform" ? MFPriorMode::kFixedUniform
                                               : MFPriorMode::kPreviousIterate;
  mc.trace_cadence = config.cadence;
  MFResult result = run_mf_bayesian_q(mf_game, mc);

  std::ofstream trace = open_out(join_path(config.out_dir, "trace.csv"));
  trace << "run_id,iter,residual\n";
  for (size_t k = 0; k < result.residuals.size(); ++k)
    trace << run_id << "," << (k + 1) << ","
          << format_double(result.residuals[k]) << "\n";
  files->push_back(join_path(config.out_dir, "trace.csv"));

  std::ofstream mean_field =
      open_out(join_path(config.out_dir, "mean_field.csv"));
  mean_field << "iter,t,state,action,mass\n";
  for (const auto& [iter, field] : result.field_trace) {
    for (int t = 0; t < field.slices(); ++t) {
      for (int s = 0; s < mf_game.n_states; ++s) {
        for (int a = 0; a < mf_game.n_actions; ++a) {
          mean_field << iter << "," << t << "," << s << "," << a << ","
                     << format_double(field.at(t, s, a)) << "\n";
        }
      }
    }
  }
  files->push_back(join_path(config.out_dir, "mean_field.csv"));

  std::ofstream policy = open_out(join_path(config.out_dir, "final_policy.csv"));
  policy << "t,state,action,prob\n";
  for (size_t t = 0; t < result.policy.size(); ++t) {
    for (int s = 0; s < mf_game.n_states; ++s) {
      for (int a = 0; a < mf_game.n_actions; ++a) {
        policy << t << "," << s << "," << a << ","
               << format_double(result.policy[t].at(s, a)) << "\n";
      }
    }
  }
  files->push_back(join_path(config.out_dir, "final_policy.csv"));

  std::ofstream report = open_out(join_path(config.out_dir, "report.csv"));
  double gap = mf_exploitability(mf_game, result.policy, result.mean_field);
  double bound = (mf_game.horizon + 1) *
                 std::log(static_cast<double>(mf_game.n_actions));
  report << "agent,gap,bound_kind,bound,pass\n";
  report << "0," << format_double(gap) << ",finite-horizon,"
         << format_double(bound) << "," << (gap <= bound ? "pass" : "fail")
         << "\n";
  files->push_back(join_path(config.out_dir, "report.csv"));
  return result.converged ? 0 : 3;
}

int run_exploitability(const RunConfig& config, bool certify_only,
                       std::vector<std::string>* files) {
  GameSpec game = load_game(config.game_path);
  if (!validate(game).empty()) return 2;
  std::vector<StatePolicy> marginals;
  if (config.policy == "uniform") {
    for (int i = 0; i < game.n_agents; ++i)
      marginals.push_back(
          StatePolicy::uniform(game.n_states, game.n_actions[i]));
  } else {
    marginals = read_marginals_csv(config.policy, game);
  }
  ExploitabilityReport report = exploitability(game, marginals);
  std::vector<Certification> certs;
  if (certify_only) {
    BoundKind kind = BoundKind::kThm58Joint;
    if (config.bound == "finite") kind = BoundKind::kThm42;
    if (config.bound == "max") kind = BoundKind::kThm58Max;
    certs.push_back(certify_eps_nash(report, game, kind, config.delta));
  } else {
    certs = standard_certifications(game, report, config.delta);
  }
  write_report_csv(join_path(config.out_dir, "report.csv"), game, report,
                   certs, files);
  return 0;
}

}  // namespace

Command command_from_string(const std::string& s) {
  if (s == "solve-nash") return Command::kSolveNash;
  if (s == "solve-zs") return Command::kSolveZs;
  if (s == "solve-ce") return Command::kSolveCe;
  if (s == "solve-mf") return Command::kSolveMf;
  if (s == "exploitability") return Command::kExploitability;
  if (s == "gen-game") return Command::kGenGame;
  if (s == "certify") return Command::kCertify;
  throw ParameterError("unknown command: " + s);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

RunRecord run(const RunConfig& config) {
  RunRecord record;
  record.run_id = "run-" + std::to_string(config.seed);
  try {
    std::filesystem::create_directories(config.out_dir);
    VSG_CHECK(config.cadence >= 1, "cadence must be >= 1");
    write_config_echo(config, record.run_id, &record.files_written);
    switch (config.command) {
      case Command::kSolveNash:
      case Command::kSolveZs:
        record.exit_code =
            solve_stochastic(config, record.run_id, &record.files_written);
        break;
      case Command::kSolveCe:
        record.exit_code =
            solve_ce(config, record.run_id, &record.files_written);
        break;
      case Command::kSolveMf:
        record.exit_code =
            solve_mf(config, record.run_id, &record.files_written);
        break;
      case Command::kExploitability:
        record.exit_code =
            run_exploitability(config, false, &record.files_written);
        break;
      case Command::kCertify:
        record.exit_code =
            run_exploitability(config, true, &record.files_written);
        break;
      case Command::kGenGame: {
        GameSpec game = generate_named_game(config);
        std::string path = join_path(config.out_dir, "game.json");
        save_game(game, path);
        record.files_written.push_back(path);
        record.exit_code = 0;
        break;
      }
    }
  } catch (const ParameterError& e) {
    record.exit_code = 1;
    record.message = e.what();
  } catch (const VsgError& e) {
    record.exit_code = 3;
    record.message = e.what();
  }
  return record;
}

void emit_learning_curve(const std::vector<std::string>& trace_paths,
                         const std::string& out_path) {
  VSG_CHECK(!trace_paths.empty(), "emit_learning_curve: no traces");
  std::vector<std::vector<double>> curves;
  size_t longest = 0;
  for (const std::string& path : trace_paths) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open trace: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> curve;
    long last_iter = -1;
    double sum = 0.0;
    int count = 0;
    while (std::getline(in, line)) {
      std::stringstream row(line);
      std::string field;
      std::getline(row, field, ',');  // run_id
      std::getline(row, field, ',');
      long iter = std::stol(field);
      std::getline(row, field, ',');  // agent
      std::getline(row, field, ',');  // elbo
      std::getline(row, field, ',');  // value
      double value = std::stod(field);
      if (iter != last_iter && last_iter >= 0) {
        curve.push_back(sum / count);
        sum = 0.0;
        count = 0;
      }
      last_iter = iter;
      sum += value;
      ++count;
    }
    if (count > 0) curve.push_back(sum / count);
    VSG_CHECK(!curve.empty(),
              "emit_learning_curve: trace has no metric rows: " + path);
    longest = std::max(longest, curve.size());
    curves.push_back(std::move(curve));
  }
  std::ofstream out = open_out(out_path);
  for (size_t k = 0; k < longest; ++k) {
    out << (k + 1);
    for (const std::vector<double>& curve : curves) {
      double v = k < curve.size() ? curve[k] : curve.back();
      out << " " << format_double(v);
    }
    out << "\n";
  }
}

std::vector<RunRecord> run_batch(const RunConfig& config,
                                 const std::vector<std::uint64_t>& seeds) {
  int max_threads = 1;
  if (const char* env = std::getenv("VSG_THREADS")) {
    max_threads = std::max(1, std::atoi(env));
  }
  std::vector<RunRecord> records(seeds.size());
  std::vector<RunConfig> configs;
  configs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    RunConfig job = config;
    job.seed = seed;
    job.out_dir = join_path(config.out_dir, "seed-" + std::to_string(seed));
    configs.push_back(std::move(job));
  }
  size_t next = 0;
  while (next < configs.size()) {
    size_t batch = std::min<size_t>(max_threads, configs.size() - next);
    std::vector<std::thread> workers;
    for (size_t k = 0; k < batch; ++k) {
      size_t idx = next + k;
      workers.emplace_back(
          [&records, &configs, idx]() { records[idx] = run(configs[idx]); });
    }
    for (std::thread& w : workers) w.join();
    next += batch;
  }
  std::vector<std::string> traces;
  for (const RunConfig& job : configs)
    traces.push_back(join_path(job.out_dir, "trace.csv"));
  bool all_have_traces = true;
  for (const std::string& t : traces)
    all_have_traces = all_have_traces && std::filesystem::exists(t);
  if (all_have_traces)
    emit_learning_curve(traces, join_path(config.out_dir,
                                          "learning_curve.txt"));
  return records;
}

void write_marginals_csv(const std::string& path,
                         const std::vector<StatePolicy>& marginals) {
  std::ofstream out = open_out(path);
  out << "agent,state,action,prob\n";
  for (size_t i = 0; i < marginals.size(); ++i) {
    for (int s = 0; s < marginals[i].n_states; ++s) {
      for (int a = 0; a < marginals[i].n_actions; ++a) {
        out << i << "," << s << "," << a << ","
            << format_double(marginals[i].at(s, a)) << "\n";
      }
    }
  }
}

std::vector<StatePolicy> read_marginals_csv(const std::string& path,
                                            const GameSpec& game) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open policy file: " + path);
  std::vector<StatePolicy> marginals;
  for (int i = 0; i < game.n_agents; ++i)
    marginals.emplace_back(game.n_states, game.n_actions[i]);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    int agent = std::stoi(field);
    std::getline(row, field, ',');
    int s = std::stoi(field);
    std::getline(row, field, ',');
    int a = std::stoi(field);
    std::getline(row, field, ',');
    double p = std::stod(field);
    VSG_CHECK(agent >= 0 && agent < game.n_agents,
              "policy file: agent out of range");
    marginals[agent].at(s, a) = p;
  }
  return marginals;
}

}  // namespace vsg
