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

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vsg/harness.h"

namespace {

void add_common_options(CLI::App* cmd, vsg::RunConfig* config,
                        std::string* seeds) {
  cmd->add_option("--game", config->game_path, "Game file (JSON)");
  cmd->add_option("--out", config->out_dir, "Output directory");
  cmd->add_option("--seed", config->seed, "RNG seed");
  cmd->add_option("--seeds", *seeds,
                  "Comma-separated seed list for a batch run");
  cmd->add_option("--eta", config->eta, "Learning rate (0 = solver default)");
  cmd->add_option("--iters", config->iters, "Iteration cap");
  cmd->add_option("--tol", config->tol, "Convergence tolerance");
  cmd->add_option("--opponent-mode", config->opponent_mode,
                  "oracle | empirical | variational");
  cmd->add_option("--damping", config->damping, "Mean-field damping");
  cmd->add_option("--mf-prior", config->mf_prior,
                  "Mean-field prior: previous | uniform");
  cmd->add_option("--signal", config->signal_path,
                  "Signal scheme file (JSON) for solve-ce");
  cmd->add_option("--cadence", config->cadence,
                  "Exploitability cadence (iterations)");
  cmd->add_option("--policy", config->policy,
                  "'uniform' or a marginals CSV path");
  cmd->add_option("--bound", config->bound,
                  "Certification bound: finite | joint | max");
  cmd->add_option("--delta", config->delta, "Model-error term of the bound");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::string current;
  for (char c : text + ",") {
    if (c == ',') {
      if (!current.empty()) seeds.push_back(std::stoull(current));
      current.clear();
    } else {
      current += c;
    }
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-equilibrium solver suite for finite stochastic games"};
  app.require_subcommand(1);

  vsg::RunConfig config;
  std::string seeds;

  struct SubEntry {
    const char* name;
    vsg::Command command;
    const char* help;
  };
  const SubEntry entries[] = {
      {"solve-nash", vsg::Command::kSolveNash,
       "Solve for a soft Nash equilibrium"},
      {"solve-zs", vsg::Command::kSolveZs,
       "Solve a two-player zero-sum game with the analytic opponent update"},
      {"solve-ce", vsg::Command::kSolveCe,
       "Solve for a correlated equilibrium via signal augmentation"},
      {"solve-mf", vsg::Command::kSolveMf,
       "Solve a mean-field game by backward-forward iteration"},
      {"exploitability", vsg::Command::kExploitability,
       "Exact exploitability of a policy"},
      {"gen-game", vsg::Command::kGenGame, "Write a named game to JSON"},
      {"certify", vsg::Command::kCertify,
       "Certify a policy against an eps-Nash bound"},
  };
  std::vector<CLI::App*> subs;
  for (const SubEntry& entry : entries) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.help);
    add_common_options(sub, &config, &seeds);
    if (entry.command == vsg::Command::kGenGame) {
      sub->add_option("--name", config.gen_name,
                      "pd | mp | rps | chicken | diffgame | random-mpg | "
                      "random");
      sub->add_option("--states", config.gen_states, "Generator state count");
      sub->add_option("--actions", config.gen_actions,
                      "Generator action count");
      sub->add_option("--agents", config.gen_agents, "Generator agent count");
      sub->add_option("--gamma", config.gen_gamma, "Generator discount");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (size_t k = 0; k < subs.size(); ++k) {
    if (subs[k]->parsed()) config.command = entries[k].command;
  }

  auto start = std::chrono::steady_clock::now();
  int exit_code = 0;
  if (!seeds.empty()) {
    std::vector<vsg::RunRecord> records =
        vsg::run_batch(config, parse_seeds(seeds));
    for (const vsg::RunRecord& record : records) {
      if (!record.message.empty())
        std::fprintf(stderr, "[%s] %s\n", record.run_id.c_str(),
                     record.message.c_str());
      exit_code = std::max(exit_code, record.exit_code);
    }
  } else {
    vsg::RunRecord record = vsg::run(config);
    if (!record.message.empty())
      std::fprintf(stderr, "[%s] %s\n", record.run_id.c_str(),
                   record.message.c_str());
    exit_code = record.exit_code;
  }
  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  std::fprintf(stdout, "done in %.3fs (exit %d)\n", elapsed, exit_code);
  return exit_code;
}
