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

#include "risd2d/oracle.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace risd2d {

RealizationEvaluator::RealizationEvaluator(const Scenario& scenario, const ChannelRealization& real)
    : scenario_(&scenario), pairs_(scenario.topology.num_pairs()), users_(scenario.topology.num_users()) {
  const Eigen::Index n = real.num_elements();
  const Eigen::Index links = 2 * pairs_ + users_ + users_ * pairs_;
  products_.resize(n, links);
  los_.resize(links);
  Eigen::Index c = 0;
  for (int i = 0; i < pairs_; ++i, ++c) {
    products_.col(c) = real.tx_ris.col(i).cwiseProduct(real.ris_rx.col(i));
    los_[c] = real.tx_rx[i];
  }
  for (int i = 0; i < pairs_; ++i, ++c) {
    products_.col(c) = real.tx_ris.col(i).cwiseProduct(real.ris_bs);
    los_[c] = real.tx_bs[i];
  }
  for (int k = 0; k < users_; ++k, ++c) {
    products_.col(c) = real.user_ris.col(k).cwiseProduct(real.ris_bs);
    los_[c] = real.user_bs[k];
  }
  for (int k = 0; k < users_; ++k) {
    for (int i = 0; i < pairs_; ++i, ++c) {
      products_.col(c) = real.ris_rx.col(i).cwiseProduct(real.user_ris.col(k));
      los_[c] = real.user_rx(k, i);
    }
  }
  power_.resize(links);
}

double RealizationEvaluator::sum_rate(const Eigen::VectorXcd& coefficients) const {
  const Eigen::Index n = products_.rows();
  for (Eigen::Index c = 0; c < products_.cols(); ++c) {
    std::complex<double> g(los_[c], 0.0);
    for (Eigen::Index e = 0; e < n; ++e) g += coefficients[e] * products_(e, c);
    power_[c] = std::norm(g);
  }
  const RadioConfig& radio = scenario_->radio;
  const Eigen::MatrixXi& reuse = scenario_->topology.reuse;
  const Eigen::Index d2d_bs = pairs_;
  const Eigen::Index cell = 2 * pairs_;
  const Eigen::Index cross = 2 * pairs_ + users_;
  double total = 0.0;
  for (int i = 0; i < pairs_; ++i) {
    double interference = 0.0;
    for (int k = 0; k < users_; ++k) {
      if (reuse(i, k) != 0) interference += radio.p_cell[k] * power_[cross + k * pairs_ + i];
    }
    total += radio.bw_d2d[i] * std::log2(1.0 + radio.p_d2d[i] * power_[i] / (interference + radio.noise_power));
  }
  for (int k = 0; k < users_; ++k) {
    double interference = 0.0;
    for (int i = 0; i < pairs_; ++i) {
      if (reuse(i, k) != 0) interference += radio.p_d2d[i] * power_[d2d_bs + i];
    }
    total += radio.bw_cell[k] * std::log2(1.0 + radio.p_cell[k] * power_[cell + k] / (interference + radio.noise_power));
  }
  return total;
}

PhaseConfig phase_from_index(std::size_t index, int num_elements, int levels, double amplitude) {
  PhaseConfig p = PhaseConfig::zeros(num_elements, levels, amplitude);
  for (int n = 0; n < num_elements; ++n) {
    p.steps[n] = static_cast<int>(index % static_cast<std::size_t>(levels));
    index /= static_cast<std::size_t>(levels);
  }
  return p;
}

namespace {

std::size_t lattice_size(int num_elements, int levels, int cells, std::size_t ceiling) {
  if (num_elements < 0 || levels < 1 || cells < 1) throw std::invalid_argument("oracle: invalid dimensions");
  std::size_t size = static_cast<std::size_t>(cells);
  for (int n = 0; n < num_elements; ++n) {
    if (size > ceiling / static_cast<std::size_t>(levels)) {
      throw CapacityError("exhaustive search over " + std::to_string(levels) + "^" + std::to_string(num_elements) +
                          " x " + std::to_string(cells) + " configurations exceeds the ceiling of " +
                          std::to_string(ceiling));
    }
    size *= static_cast<std::size_t>(levels);
  }
  if (size > ceiling) throw CapacityError("exhaustive search exceeds the configured ceiling");
  return size;
}

std::vector<RealizationEvaluator> realize_cell(const Scenario& scenario, int cell, int num_elements, int draws,
                                               const Rng& stream) {
  const Topology& topo = scenario.topology;
  const Position ris = grid_center(cell, topo.area_side, topo.grid_count);
  Rng rng = stream;
  std::vector<RealizationEvaluator> evaluators;
  evaluators.reserve(static_cast<std::size_t>(draws));
  for (int d = 0; d < draws; ++d) {
    evaluators.emplace_back(scenario, realize_channels(topo, ris, num_elements, scenario.channel, rng));
  }
  return evaluators;
}

}  // namespace

OracleResult exhaustive_oracle(const Scenario& scenario, int num_elements, int levels, int draws,
                               const Rng& stream, std::size_t ceiling) {
  if (draws < 1) throw std::invalid_argument("oracle: draws must be >= 1");
  scenario.validate();
  const int cells = scenario.topology.grid_count;
  const std::size_t total = lattice_size(num_elements, levels, cells, ceiling);
  const std::size_t per_cell = total / static_cast<std::size_t>(cells);
  const double amplitude = scenario.channel.amplitude;

  std::vector<Eigen::VectorXcd> lattice;
  lattice.reserve(per_cell);
  for (std::size_t p = 0; p < per_cell; ++p) {
    lattice.push_back(phase_from_index(p, num_elements, levels, amplitude).coefficients());
  }

  OracleResult best;
  double best_mean = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (int cell = 0; cell < cells; ++cell) {
    const auto evaluators = realize_cell(scenario, cell, num_elements, draws, stream);
    for (std::size_t p = 0; p < per_cell; ++p) {
      double sum = 0.0;
      for (const auto& ev : evaluators) sum += ev.sum_rate(lattice[p]);
      const double mean = sum / draws;
      if (mean > best_mean) {
        best_mean = mean;
        best_index = static_cast<std::size_t>(cell) * per_cell + p;
      }
    }
  }

  best.cell = static_cast<int>(best_index / per_cell);
  best.phase = phase_from_index(best_index % per_cell, num_elements, levels, amplitude);
  best.evaluations = total;
  // Recompute with the spread so callers get a standard error on the same draws.
  const auto evaluators = realize_cell(scenario, best.cell, num_elements, draws, stream);
  const Eigen::VectorXcd c = best.phase.coefficients();
  MeanAccumulator acc;
  for (const auto& ev : evaluators) acc.add(ev.sum_rate(c));
  best.sum_rate = acc.estimate();
  return best;
}

RandomPhaseResult random_phase_best_cell(const Scenario& scenario, int num_elements, int levels, int draws,
                                         const Rng& fading_stream, const Rng& phase_stream) {
  if (draws < 1) throw std::invalid_argument("random_phase_best_cell: draws must be >= 1");
  scenario.validate();
  RandomPhaseResult best;
  bool have = false;
  for (int cell = 0; cell < scenario.topology.grid_count; ++cell) {
    const auto evaluators = realize_cell(scenario, cell, num_elements, draws, fading_stream);
    Rng phases = phase_stream;
    std::uniform_int_distribution<int> level(0, levels - 1);
    MeanAccumulator acc;
    for (const auto& ev : evaluators) {
      PhaseConfig p = PhaseConfig::zeros(num_elements, levels, scenario.channel.amplitude);
      for (int n = 0; n < num_elements; ++n) p.steps[n] = level(phases);
      acc.add(ev.sum_rate(p.coefficients()));
    }
    if (!have || acc.mean() > best.sum_rate.mean) {
      best.cell = cell;
      best.sum_rate = acc.estimate();
      have = true;
    }
  }
  return best;
}

RateEstimate no_ris_sum_rate(const Scenario& scenario, int num_elements, int draws, const Rng& stream) {
  Scenario off = scenario;
  off.channel.amplitude = 0.0;
  Rng rng = stream;
  const Position ris = grid_center(0, off.topology.area_side, off.topology.grid_count);
  return expected_sum_rate(off.topology, ris, PhaseConfig::zeros(num_elements, 1, 0.0), off.radio, off.channel,
                           draws, rng);
}

}  // namespace risd2d
