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

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "risd2d/phase.hpp"
#include "risd2d/random.hpp"
#include "risd2d/scenario.hpp"

namespace risd2d {

/// Two-row network input: positions on top, phases beneath.
using StateMatrix = Eigen::Matrix<double, 2, Eigen::Dynamic>;

enum class ActionMode {
  joint,     ///< every element moves by -d, 0 or +d: 3^N * O actions
  factored,  ///< at most one element moves per step: (2N + 1) * O actions
};

ActionMode parse_action_mode(std::string_view name);
std::string_view to_string(ActionMode mode);

inline constexpr std::size_t kDefaultJointCeiling = 1'000'000;

/// Phase increments (in lattice steps, each -1, 0 or +1) plus an absolute
/// grid cell for the RIS.
struct Action {
  Eigen::VectorXi dsteps;
  int cell = 0;

  bool operator==(const Action& o) const { return cell == o.cell && dsteps == o.dsteps; }
};

/// Throws CapacityError in joint mode when 3^N * O exceeds `ceiling`.
std::size_t action_count(int num_elements, int grid_count, ActionMode mode,
                         std::size_t ceiling = kDefaultJointCeiling);

Action decode_action(std::size_t index, int num_elements, int grid_count, ActionMode mode);
std::size_t encode_action(const Action& action, int grid_count, ActionMode mode);

/// Center of `cell` in row-major order over the sqrt(O) x sqrt(O) grid.
Position grid_center(int cell, double area_side, int grid_count);

/// max(2 * (2I + K + 2), N): each position takes two columns.
Eigen::Index state_columns(int pairs, int users, int num_elements);

StateMatrix encode_state(const Topology& topo, const Position& ris_pos, const PhaseConfig& phase);

struct DecodedState {
  std::vector<Position> d2d_tx;
  std::vector<Position> d2d_rx;
  std::vector<Position> cell_users;
  Position ris = Position::Zero();
  Position bs = Position::Zero();
  Eigen::VectorXd theta;
};

DecodedState decode_state(const StateMatrix& state, int pairs, int users, int num_elements,
                          double area_side);

/// Dynamic reward: the sum rate when both QoS constraints hold, the D2D
/// partial sum when only the D2D constraint fails, the cellular partial sum
/// when only the cellular constraint fails, zero otherwise.
double reward(double total, double d2d_sum, double cell_sum, bool d2d_ok, bool cell_ok);

struct StepInfo {
  double sum_rate = 0.0;
  double d2d_rate = 0.0;
  double cell_rate = 0.0;
  bool d2d_ok = true;
  bool cell_ok = true;
};

struct StepResult {
  StateMatrix next;
  double reward = 0.0;
  StepInfo info;
};

struct Transition {
  StateMatrix state;
  std::size_t action = 0;
  double reward = 0.0;
  StateMatrix next;
};

/// Discrete-action environment seen by the learning agents.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t action_count() const = 0;
  virtual Eigen::Index state_columns() const = 0;
  virtual StateMatrix reset() = 0;
  virtual StepResult step(std::size_t action) = 0;
  virtual const StateMatrix& state() const = 0;
  /// Exact discrete key of the current state, for tabular agents.
  virtual std::vector<int> state_key() const = 0;
  /// Number of distinct discrete states (as double, it can be astronomical).
  virtual double state_space_size() const = 0;
};

struct EnvConfig {
  int num_elements = 16;
  int phase_levels = 8;
  ActionMode action_mode = ActionMode::factored;
  int draws_per_step = 1;
  std::size_t joint_ceiling = kDefaultJointCeiling;
};

/// RIS placement and phase control over a fixed scenario. Each step applies
/// the phase increments, moves the RIS to the chosen cell, draws fresh fading
/// and scores the new configuration.
class RisEnvironment final : public Environment {
 public:
  RisEnvironment(Scenario scenario, EnvConfig config, Rng rng);

  std::size_t action_count() const override { return action_count_; }
  Eigen::Index state_columns() const override { return state_.cols(); }
  StateMatrix reset() override;
  StepResult step(std::size_t action) override;
  const StateMatrix& state() const override { return state_; }
  std::vector<int> state_key() const override;
  double state_space_size() const override;

  StepResult step(const Action& action);
  void set_configuration(const PhaseConfig& phase, int cell);

  const PhaseConfig& phase() const { return phase_; }
  int cell() const { return cell_; }
  Position ris_position() const;
  const Scenario& scenario() const { return scenario_; }
  const EnvConfig& config() const { return config_; }

 private:
  Scenario scenario_;
  EnvConfig config_;
  Rng rng_;
  std::size_t action_count_ = 0;
  PhaseConfig phase_;
  int cell_ = 0;
  StateMatrix state_;
};

struct StepScore {
  double reward = 0.0;
  StepInfo info;
};

/// Reward and rate breakdown of one realization under a reflection diagonal.
StepScore score_realization(const Scenario& scenario, const ChannelRealization& real,
                            const Eigen::VectorXcd& coefficients);

}  // namespace risd2d
