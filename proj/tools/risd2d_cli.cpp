// Copyright 2026 The risd2d Authors
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

// risd2d command-line entry point.
//
//   risd2d converge       --config exp.ini [--seed N] [--agent NAME] [--out FILE]
//   risd2d sweep-power    --config exp.ini ...
//   risd2d sweep-elements --config exp.ini ...
//   risd2d oracle         --config exp.ini ...
//   risd2d eval           --config exp.ini [--save CKPT | --load CKPT] ...

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "risd2d/config.hpp"
#include "risd2d/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string agent;
  std::string action_mode;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config file (key=value with [sections])");
  cmd->add_option("--seed", flags.seed, "Run a single seed instead of the configured list");
  cmd->add_option("--out", flags.out, "CSV output path (default: experiment.output, else stdout)");
  cmd->add_option("--agent", flags.agent, "Restrict to one agent: cnn_dqn|fc_dqn|qlearning|random|oracle");
  cmd->add_option("--action-mode", flags.action_mode, "joint|factored");
}

risd2d::ExperimentConfig resolve(const CommonFlags& flags) {
  risd2d::ExperimentConfig cfg =
      flags.config.empty() ? risd2d::ExperimentConfig::defaults() : risd2d::load_config(flags.config);
  if (flags.seed) cfg.seeds = {*flags.seed};
  if (!flags.agent.empty()) cfg.agents = {risd2d::parse_agent(flags.agent)};
  if (!flags.action_mode.empty()) cfg.env.action_mode = risd2d::parse_action_mode(flags.action_mode);
  if (!flags.out.empty()) cfg.output = flags.out;
  cfg.validate();
  return cfg;
}

void emit(const risd2d::CsvTable& table, const risd2d::ExperimentConfig& cfg) {
  if (cfg.output.empty() || cfg.output == "-") {
    risd2d::write_csv(table, std::cout);
  } else {
    risd2d::write_csv(table, std::filesystem::path(cfg.output));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS placement and phase optimization for D2D underlay networks"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string save_path;
  std::string load_path;

  auto* converge = app.add_subcommand("converge", "Learning curves (reward, running average, loss, epsilon)");
  auto* sweep_power = app.add_subcommand("sweep-power", "Sum rate against D2D or cellular transmit power");
  auto* sweep_elements = app.add_subcommand("sweep-elements", "Sum rate against the number of RIS elements");
  auto* oracle = app.add_subcommand("oracle", "Exhaustive search over phases and grid cells");
  auto* eval = app.add_subcommand("eval", "Train (or load) an agent and report its RIS installation");
  for (auto* cmd : {converge, sweep_power, sweep_elements, oracle, eval}) add_common(cmd, flags);
  auto* save_opt = eval->add_option("--save", save_path, "Write the trained network checkpoint");
  eval->add_option("--load", load_path, "Evaluate a saved network instead of training")->excludes(save_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const risd2d::ExperimentConfig cfg = resolve(flags);
    if (*converge) {
      emit(risd2d::run_convergence(cfg), cfg);
    } else if (*sweep_power) {
      emit(risd2d::run_power_sweep(cfg), cfg);
    } else if (*sweep_elements) {
      emit(risd2d::run_element_sweep(cfg), cfg);
    } else if (*oracle) {
      emit(risd2d::run_oracle(cfg), cfg);
    } else if (*eval) {
      risd2d::EvalOptions options;
      if (!save_path.empty()) options.save_checkpoint = save_path;
      if (!load_path.empty()) options.load_checkpoint = load_path;
      emit(risd2d::run_eval(cfg, options), cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "risd2d: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
