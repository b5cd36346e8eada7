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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risd2d/agents.hpp"
#include "risd2d/config.hpp"
#include "risd2d/neuralnet.hpp"

namespace risd2d {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

void write_csv(const CsvTable& table, std::ostream& out);
void write_csv(const CsvTable& table, const std::filesystem::path& path);

/// Per-seed random streams. Every agent trained with the same seed sees the
/// same environment fading and is evaluated on the same realizations.
struct SeedStreams {
  Rng env;
  Rng agent;
  Rng eval;
  Rng phase;

  explicit SeedStreams(std::uint64_t seed);
};

nn::NetworkArch network_arch(AgentKind agent, const ExperimentConfig& cfg, const Environment& env);

struct AgentOutcome {
  MetricsLog log;
  Placement placement;
  std::optional<nn::QNetwork<double>> network;
};

/// Trains `agent` on (scenario, env_cfg) and selects its installation. The
/// oracle skips training and searches exhaustively on the evaluation draws.
AgentOutcome run_agent(AgentKind agent, const ExperimentConfig& cfg, const Scenario& scenario,
                       const EnvConfig& env_cfg, std::uint64_t seed);

/// Learning curves: one row per iteration, seed and agent.
CsvTable run_convergence(const ExperimentConfig& cfg);
/// Sum rate of each agent's installation against transmit power, plus a no-RIS series.
CsvTable run_power_sweep(const ExperimentConfig& cfg);
/// Optimized-phase versus random-phase sum rate against the element count.
CsvTable run_element_sweep(const ExperimentConfig& cfg);
/// Exhaustive optimum for the configured scenario.
CsvTable run_oracle(const ExperimentConfig& cfg);

struct EvalOptions {
  std::optional<std::filesystem::path> load_checkpoint;
  std::optional<std::filesystem::path> save_checkpoint;
};

/// Installation chosen by each agent, optionally from or to a checkpoint.
CsvTable run_eval(const ExperimentConfig& cfg, const EvalOptions& options = {});

}  // namespace risd2d
