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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "risd2d/agents.hpp"
#include "risd2d/env.hpp"
#include "risd2d/neuralnet.hpp"
#include "risd2d/scenario.hpp"

namespace risd2d {

/// Configuration problem; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class AgentKind { cnn_dqn, fc_dqn, qlearning, random, oracle };

AgentKind parse_agent(std::string_view name);
std::string_view to_string(AgentKind agent);

enum class SweepVariable { none, p_d2d_dbm, p_cell_dbm, num_elements };

SweepVariable parse_sweep_variable(std::string_view name);
std::string_view to_string(SweepVariable variable);

struct ExperimentConfig {
  Scenario scenario;
  EnvConfig env;
  TrainConfig train;
  nn::ConvSpec conv;
  nn::Index hidden_units = 256;

  std::vector<AgentKind> agents = {AgentKind::cnn_dqn, AgentKind::fc_dqn, AgentKind::random};
  SweepVariable sweep_variable = SweepVariable::none;
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int eval_draws = 200;
  int eval_horizon = 200;
  std::size_t oracle_ceiling = kDefaultJointCeiling;
  std::string output;

  /// Reference deployment: one D2D pair and one cellular user, N = 16,
  /// O = 25, pi/4 phase steps, p_i = 15 dBm, p_k = 30 dBm, noise -116 dBm,
  /// SINR floors -10 dB / -13 dB, alpha = 3, discount 0.9.
  static ExperimentConfig defaults();

  void validate() const;
  /// Every resolved field as sorted key=value lines with round-trip precision.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
};

/// Parses the sectioned key=value format (see docs/config.md). Missing keys
/// keep their defaults; unknown sections or keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "15dBm" -> watts; a bare number is already in watts.
double parse_power(std::string_view key, std::string_view value);
/// "-10dB" -> linear; a bare number is already linear.
double parse_ratio(std::string_view key, std::string_view value);

}  // namespace risd2d
