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

#ifndef VSG_HARNESS_H_
#define VSG_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vsg/game.h"
#include "vsg/policy.h"

namespace vsg {

enum class Command {
  kSolveNash,
  kSolveZs,
  kSolveCe,
  kSolveMf,
  kExploitability,
  kGenGame,
  kCertify
};

Command command_from_string(const std::string& s);

struct RunConfig {
  Command command = Command::kSolveNash;
  std::string game_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  // Solver parameters.
  double eta = 0.0;  // 0 resolves to the solver default
  long iters = 2000;
  double tol = 1e-8;
  std::string opponent_mode = "oracle";  // oracle | empirical | variational
  double damping = 0.5;                  // mean-field damping
  std::string mf_prior = "previous";     // previous | uniform
  std::string signal_path;               // JSON {"sigma": [...]} for solve-ce
  int cadence = 1;                       // exploitability every k iterations

  // exploitability / certify inputs.
  std::string policy = "uniform";  // "uniform" or marginals CSV path
  std::string bound = "joint";     // finite | joint | max
  double delta = 0.0;

  // gen-game inputs.
  std::string gen_name;  // pd | mp | rps | chicken | diffgame | random-mpg
  int gen_states = 2;
  int gen_actions = 2;
  int gen_agents = 2;
  double gen_gamma = 0.9;
};

struct RunRecord {
  int exit_code = 0;
  std::string run_id;
  std::vector<std::string> files_written;
  std::string message;
};

// Dispatches the configured command, writing trace.csv, final artifacts,
// report.csv and config_echo.json into out_dir. All randomness flows from
// the seed; reruns are byte-identical. Exit codes: 0 success, 1 usage error,
// 2 game validation failure, 3 solver non-convergence (partial trace kept).
RunRecord run(const RunConfig& config);

// Aggregates trace files into a plot-ready text file: column 1 iteration,
// then one mean-return column per trace. Shorter traces are extended with
// their final value. Requires at least one metric row per trace.
void emit_learning_curve(const std::vector<std::string>& trace_paths,
                         const std::string& out_path);

// Runs one job per seed (out_dir/seed-<seed>/), then writes the aggregated
// learning curve. Parallelism is capped by VSG_THREADS (default 1).
std::vector<RunRecord> run_batch(const RunConfig& config,
                                 const std::vector<std::uint64_t>& seeds);

// 17-significant-digit float formatting used for all emitted files.
std::string format_double(double x);

// Marginal-policy CSV helpers (agent,state,action,prob).
void write_marginals_csv(const std::string& path,
                         const std::vector<StatePolicy>& marginals);
std::vector<StatePolicy> read_marginals_csv(const std::string& path,
                                            const GameSpec& game);

}  // namespace vsg

#endif  // VSG_HARNESS_H_
