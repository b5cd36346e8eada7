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

#include "risd2d/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace risd2d {

namespace {

// 3^n, saturating at max size_t.
std::size_t pow3_saturating(int n) {
  std::size_t value = 1;
  for (int i = 0; i < n; ++i) {
    if (value > std::numeric_limits<std::size_t>::max() / 3) return std::numeric_limits<std::size_t>::max();
    value *= 3;
  }
  return value;
}

void require_dims(int num_elements, int grid_count) {
  if (num_elements < 0 || grid_count < 1) {
    throw std::invalid_argument("action space: requires N >= 0 and O >= 1");
  }
}

}  // namespace

ActionMode parse_action_mode(std::string_view name) {
  if (name == "joint") return ActionMode::joint;
  if (name == "factored") return ActionMode::factored;
  throw std::invalid_argument("unknown action mode '" + std::string(name) + "' (expected joint|factored)");
}

std::string_view to_string(ActionMode mode) { return mode == ActionMode::joint ? "joint" : "factored"; }

std::size_t action_count(int num_elements, int grid_count, ActionMode mode, std::size_t ceiling) {
  require_dims(num_elements, grid_count);
  const auto cells = static_cast<std::size_t>(grid_count);
  if (mode == ActionMode::factored) return (2 * static_cast<std::size_t>(num_elements) + 1) * cells;
  const std::size_t per_cell = pow3_saturating(num_elements);
  if (per_cell > ceiling / cells) {
    throw CapacityError("joint action space 3^" + std::to_string(num_elements) + " x " +
                        std::to_string(grid_count) + " exceeds the ceiling of " + std::to_string(ceiling) +
                        "; use --action-mode factored");
  }
  return per_cell * cells;
}

Action decode_action(std::size_t index, int num_elements, int grid_count, ActionMode mode) {
  const std::size_t total = action_count(num_elements, grid_count, mode, std::numeric_limits<std::size_t>::max());
  if (index >= total) {
    throw std::invalid_argument("decode_action: index " + std::to_string(index) + " out of range [0, " +
                                std::to_string(total) + ")");
  }
  const std::size_t per_cell = total / static_cast<std::size_t>(grid_count);
  Action a;
  a.cell = static_cast<int>(index / per_cell);
  a.dsteps = Eigen::VectorXi::Zero(num_elements);
  std::size_t rest = index % per_cell;
  if (mode == ActionMode::joint) {
    for (int n = 0; n < num_elements; ++n) {
      a.dsteps[n] = static_cast<int>(rest % 3) - 1;
      rest /= 3;
    }
  } else if (rest > 0) {
    const auto element = static_cast<int>((rest - 1) / 2);
    a.dsteps[element] = (rest % 2 == 1) ? -1 : +1;
  }
  return a;
}

std::size_t encode_action(const Action& action, int grid_count, ActionMode mode) {
  const int n = static_cast<int>(action.dsteps.size());
  const std::size_t total = action_count(n, grid_count, mode, std::numeric_limits<std::size_t>::max());
  const std::size_t per_cell = total / static_cast<std::size_t>(grid_count);
  if (action.cell < 0 || action.cell >= grid_count) throw std::invalid_argument("encode_action: cell out of range");
  if ((action.dsteps.array().abs() > 1).any()) throw std::invalid_argument("encode_action: increments must be -1, 0 or +1");
  std::size_t offset = 0;
  if (mode == ActionMode::joint) {
    for (int e = n - 1; e >= 0; --e) offset = offset * 3 + static_cast<std::size_t>(action.dsteps[e] + 1);
  } else {
    int moved = -1;
    for (int e = 0; e < n; ++e) {
      if (action.dsteps[e] == 0) continue;
      if (moved >= 0) throw std::invalid_argument("encode_action: factored mode moves at most one element");
      moved = e;
    }
    if (moved >= 0) offset = 2 * static_cast<std::size_t>(moved) + (action.dsteps[moved] < 0 ? 1 : 2);
  }
  return static_cast<std::size_t>(action.cell) * per_cell + offset;
}

Position grid_center(int cell, double area_side, int grid_count) {
  if (cell < 0 || cell >= grid_count) {
    throw std::invalid_argument("grid_center: cell " + std::to_string(cell) + " out of range");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(grid_count))));
  const double width = area_side / side;
  return {(cell % side + 0.5) * width, (cell / side + 0.5) * width};
}

Eigen::Index state_columns(int pairs, int users, int num_elements) {
  return std::max<Eigen::Index>(2 * (2 * pairs + users + 2), num_elements);
}

StateMatrix encode_state(const Topology& topo, const Position& ris_pos, const PhaseConfig& phase) {
  const Eigen::Index cols = state_columns(topo.num_pairs(), topo.num_users(), phase.size());
  StateMatrix s = StateMatrix::Zero(2, cols);
  Eigen::Index c = 0;
  auto put = [&](const Position& p) {
    s(0, c++) = p.x() / topo.area_side;
    s(0, c++) = p.y() / topo.area_side;
  };
  for (int i = 0; i < topo.num_pairs(); ++i) {
    put(topo.d2d_tx[i]);
    put(topo.d2d_rx[i]);
  }
  for (const auto& u : topo.cell_users) put(u);
  put(ris_pos);
  put(topo.bs);
  s.row(1).head(phase.size()) = phase.theta().transpose();
  return s;
}

DecodedState decode_state(const StateMatrix& state, int pairs, int users, int num_elements,
                          double area_side) {
  if (state.cols() != state_columns(pairs, users, num_elements)) {
    throw std::invalid_argument("decode_state: column count does not match dimensions");
  }
  DecodedState out;
  Eigen::Index c = 0;
  auto take = [&]() {
    Position p(state(0, c) * area_side, state(0, c + 1) * area_side);
    c += 2;
    return p;
  };
  for (int i = 0; i < pairs; ++i) {
    out.d2d_tx.push_back(take());
    out.d2d_rx.push_back(take());
  }
  for (int k = 0; k < users; ++k) out.cell_users.push_back(take());
  out.ris = take();
  out.bs = take();
  out.theta = state.row(1).head(num_elements).transpose();
  return out;
}

double reward(double total, double d2d_sum, double cell_sum, bool d2d_ok, bool cell_ok) {
  if (d2d_ok && cell_ok) return total;
  if (!d2d_ok && cell_ok) return d2d_sum;
  if (d2d_ok && !cell_ok) return cell_sum;
  return 0.0;
}

StepScore score_realization(const Scenario& scenario, const ChannelRealization& real,
                            const Eigen::VectorXcd& coefficients) {
  const RateBreakdown rates = sum_rate(real, coefficients, scenario.radio, scenario.topology);
  const QosStatus qos = qos_check(rates.sinr_d2d, rates.sinr_cell, scenario.radio);
  StepScore out;
  out.info = {rates.total, rates.d2d, rates.cellular, qos.d2d_ok, qos.cell_ok};
  out.reward = reward(rates.total, rates.d2d, rates.cellular, qos.d2d_ok, qos.cell_ok);
  return out;
}

RisEnvironment::RisEnvironment(Scenario scenario, EnvConfig config, Rng rng)
    : scenario_(std::move(scenario)), config_(config), rng_(std::move(rng)) {
  scenario_.validate();
  if (config_.phase_levels < 1) throw std::invalid_argument("environment: phase_levels must be >= 1");
  if (config_.draws_per_step < 1) throw std::invalid_argument("environment: draws_per_step must be >= 1");
  action_count_ = risd2d::action_count(config_.num_elements, scenario_.topology.grid_count,
                                       config_.action_mode, config_.joint_ceiling);
  reset();
}

StateMatrix RisEnvironment::reset() {
  set_configuration(PhaseConfig::zeros(config_.num_elements, config_.phase_levels, scenario_.channel.amplitude), 0);
  return state_;
}

void RisEnvironment::set_configuration(const PhaseConfig& phase, int cell) {
  if (phase.size() != config_.num_elements || phase.levels != config_.phase_levels) {
    throw std::invalid_argument("environment: phase configuration does not match the environment");
  }
  if (cell < 0 || cell >= scenario_.topology.grid_count) throw std::invalid_argument("environment: cell out of range");
  phase_ = phase;
  cell_ = cell;
  state_ = encode_state(scenario_.topology, ris_position(), phase_);
}

Position RisEnvironment::ris_position() const {
  return grid_center(cell_, scenario_.topology.area_side, scenario_.topology.grid_count);
}

StepResult RisEnvironment::step(std::size_t action) {
  return step(decode_action(action, config_.num_elements, scenario_.topology.grid_count, config_.action_mode));
}

StepResult RisEnvironment::step(const Action& action) {
  if (action.cell < 0 || action.cell >= scenario_.topology.grid_count) {
    throw std::invalid_argument("environment: cell out of range");
  }
  phase_.shift(action.dsteps);
  cell_ = action.cell;
  const Position ris = ris_position();
  const Eigen::VectorXcd coefficients = phase_.coefficients();

  StepResult out;
  StepInfo& info = out.info;
  info = {0.0, 0.0, 0.0, true, true};
  const double weight = 1.0 / config_.draws_per_step;
  for (int d = 0; d < config_.draws_per_step; ++d) {
    const auto real = realize_channels(scenario_.topology, ris, config_.num_elements, scenario_.channel, rng_);
    const StepScore score = score_realization(scenario_, real, coefficients);
    out.reward += weight * score.reward;
    info.sum_rate += weight * score.info.sum_rate;
    info.d2d_rate += weight * score.info.d2d_rate;
    info.cell_rate += weight * score.info.cell_rate;
    info.d2d_ok = info.d2d_ok && score.info.d2d_ok;
    info.cell_ok = info.cell_ok && score.info.cell_ok;
  }
  state_ = encode_state(scenario_.topology, ris, phase_);
  out.next = state_;
  return out;
}

std::vector<int> RisEnvironment::state_key() const {
  std::vector<int> key(phase_.steps.data(), phase_.steps.data() + phase_.steps.size());
  key.push_back(cell_);
  return key;
}

double RisEnvironment::state_space_size() const {
  return std::pow(static_cast<double>(config_.phase_levels), config_.num_elements) * scenario_.topology.grid_count;
}

}  // namespace risd2d
