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

#include "risd2d/experiments.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "risd2d/checkpoint.hpp"
#include "risd2d/oracle.hpp"

namespace risd2d {

namespace {

std::string num(double v) { return fmt::format("{:.10g}", v); }

std::string steps_string(const PhaseConfig& p) {
  std::string out;
  for (Eigen::Index n = 0; n < p.steps.size(); ++n) out += (n ? " " : "") + std::to_string(p.steps[n]);
  return out;
}

std::size_t lattice_count(int num_elements, int levels, int cells, std::size_t ceiling) {
  double count = std::pow(static_cast<double>(levels), num_elements) * cells;
  return count > static_cast<double>(ceiling) ? ceiling + 1 : static_cast<std::size_t>(count);
}

Scenario with_power(const Scenario& base, SweepVariable variable, double dbm) {
  Scenario s = base;
  if (variable == SweepVariable::p_d2d_dbm) s.radio.p_d2d.setConstant(dbm_to_watt(dbm));
  if (variable == SweepVariable::p_cell_dbm) s.radio.p_cell.setConstant(dbm_to_watt(dbm));
  return s;
}

Placement placement_from_rollout(RisEnvironment& env, const GreedyPolicy& policy, const ExperimentConfig& cfg,
                                 const SeedStreams& streams) {
  return greedy_placement(env, policy, cfg.eval_horizon, cfg.eval_draws, streams.eval);
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream out;
  write_csv(*this, out);
  return out.str();
}

void write_csv(const CsvTable& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(table, out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SeedStreams::SeedStreams(std::uint64_t seed)
    : env(seeded_rng(seed, "env")),
      agent(seeded_rng(seed, "agent")),
      eval(seeded_rng(seed, "eval")),
      phase(seeded_rng(seed, "phase")) {}

nn::NetworkArch network_arch(AgentKind agent, const ExperimentConfig& cfg, const Environment& env) {
  const auto outputs = static_cast<nn::Index>(env.action_count());
  if (agent == AgentKind::cnn_dqn) return nn::cnn_arch(env.state_columns(), outputs, cfg.conv, cfg.hidden_units);
  if (agent == AgentKind::fc_dqn) return nn::fc_arch(env.state_columns(), outputs, cfg.hidden_units);
  throw std::invalid_argument("network_arch: agent '" + std::string(to_string(agent)) + "' has no network");
}

AgentOutcome run_agent(AgentKind agent, const ExperimentConfig& cfg, const Scenario& scenario,
                       const EnvConfig& env_cfg, std::uint64_t seed) {
  SeedStreams streams(seed);
  AgentOutcome out;
  if (agent == AgentKind::oracle) {
    const OracleResult best = exhaustive_oracle(scenario, env_cfg.num_elements, env_cfg.phase_levels, cfg.eval_draws,
                                                streams.eval, cfg.oracle_ceiling);
    out.placement.phase = best.phase;
    out.placement.cell = best.cell;
    out.placement.sum_rate = best.sum_rate;
    out.placement.score =
        evaluate_configuration(scenario, best.phase, best.cell, cfg.eval_draws, streams.eval).reward;
    out.placement.distinct_visited = best.evaluations;
    return out;
  }

  RisEnvironment env(scenario, env_cfg, streams.env);
  switch (agent) {
    case AgentKind::cnn_dqn:
    case AgentKind::fc_dqn: {
      DqnResult trained = dqn_train(env, network_arch(agent, cfg, env), cfg.train, streams.agent);
      out.log = std::move(trained.log);
      out.network = std::move(trained.network);
      out.placement = placement_from_rollout(env, greedy_policy(*out.network), cfg, streams);
      break;
    }
    case AgentKind::qlearning: {
      QLearningResult trained = qlearning_train(env, cfg.train, streams.agent);
      out.log = std::move(trained.log);
      out.placement = placement_from_rollout(env, greedy_policy(trained.table), cfg, streams);
      break;
    }
    case AgentKind::random: {
      out.log = random_policy(env, cfg.train.iterations, cfg.train.episode_horizon, streams.agent);
      std::uniform_int_distribution<std::size_t> uniform(0, env.action_count() - 1);
      Rng& rng = streams.agent;
      out.placement = placement_from_rollout(env, [&](const Environment&) { return uniform(rng); }, cfg, streams);
      break;
    }
    case AgentKind::oracle:
      break;
  }
  return out;
}

CsvTable run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  CsvTable table{{"config_hash", "seed", "agent", "iteration", "reward", "running_avg", "loss", "epsilon"}, {}};
  const std::string hash = cfg.hash();
  for (AgentKind agent : cfg.agents) {
    if (agent == AgentKind::oracle) {
      throw ConfigError("config key 'experiment.agents': the oracle has no learning curve; use the oracle command");
    }
  }
  for (std::uint64_t seed : cfg.seeds) {
    for (AgentKind agent : cfg.agents) {
      const AgentOutcome run = run_agent(agent, cfg, cfg.scenario, cfg.env, seed);
      for (const IterationRecord& rec : run.log) {
        table.rows.push_back({hash, std::to_string(seed), std::string(to_string(agent)), std::to_string(rec.iteration),
                              num(rec.reward), num(rec.running_avg), num(rec.loss), num(rec.epsilon)});
      }
    }
  }
  return table;
}

CsvTable run_power_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_variable != SweepVariable::p_d2d_dbm && cfg.sweep_variable != SweepVariable::p_cell_dbm) {
    throw ConfigError("config key 'experiment.sweep_variable': sweep-power needs p_d2d_dbm or p_cell_dbm");
  }
  const std::vector<double> values =
      cfg.sweep_values.empty() ? std::vector<double>{5, 10, 15, 20, 25} : cfg.sweep_values;
  CsvTable table{{"config_hash", "seed", "variable", "power_dbm", "agent", "mean_sum_rate", "stderr"}, {}};
  const std::string hash = cfg.hash();
  const std::string variable(to_string(cfg.sweep_variable));
  for (std::uint64_t seed : cfg.seeds) {
    for (double dbm : values) {
      const Scenario scenario = with_power(cfg.scenario, cfg.sweep_variable, dbm);
      for (AgentKind agent : cfg.agents) {
        const AgentOutcome run = run_agent(agent, cfg, scenario, cfg.env, seed);
        table.rows.push_back({hash, std::to_string(seed), variable, num(dbm), std::string(to_string(agent)),
                              num(run.placement.sum_rate.mean), num(run.placement.sum_rate.std_error)});
      }
      const RateEstimate off = no_ris_sum_rate(scenario, cfg.env.num_elements, cfg.eval_draws, SeedStreams(seed).eval);
      table.rows.push_back(
          {hash, std::to_string(seed), variable, num(dbm), "no_ris", num(off.mean), num(off.std_error)});
    }
  }
  return table;
}

CsvTable run_element_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_variable != SweepVariable::num_elements) {
    throw ConfigError("config key 'experiment.sweep_variable': sweep-elements needs num_elements");
  }
  std::vector<int> counts;
  if (cfg.sweep_values.empty()) {
    counts = {1, 2, 4, 8, 16};
  } else {
    for (double v : cfg.sweep_values) counts.push_back(static_cast<int>(v));
  }
  CsvTable table{{"config_hash", "seed", "num_elements", "strategy", "mean_sum_rate", "stderr"}, {}};
  const std::string hash = cfg.hash();
  const int cells = cfg.scenario.topology.grid_count;
  for (std::uint64_t seed : cfg.seeds) {
    const SeedStreams streams(seed);
    for (int n : counts) {
      EnvConfig env_cfg = cfg.env;
      env_cfg.num_elements = n;
      const bool exhaustive = lattice_count(n, env_cfg.phase_levels, cells, cfg.oracle_ceiling) <= cfg.oracle_ceiling;
      const AgentKind optimizer = exhaustive ? AgentKind::oracle : AgentKind::cnn_dqn;
      const AgentOutcome run = run_agent(optimizer, cfg, cfg.scenario, env_cfg, seed);
      table.rows.push_back({hash, std::to_string(seed), std::to_string(n), std::string(to_string(optimizer)),
                            num(run.placement.sum_rate.mean), num(run.placement.sum_rate.std_error)});
      const RandomPhaseResult random =
          random_phase_best_cell(cfg.scenario, n, env_cfg.phase_levels, cfg.eval_draws, streams.eval, streams.phase);
      table.rows.push_back({hash, std::to_string(seed), std::to_string(n), "random_phase", num(random.sum_rate.mean),
                            num(random.sum_rate.std_error)});
    }
  }
  return table;
}

CsvTable run_oracle(const ExperimentConfig& cfg) {
  cfg.validate();
  CsvTable table{{"config_hash", "seed", "num_elements", "cell", "ris_x", "ris_y", "phase_steps", "mean_sum_rate",
                  "stderr", "evaluations"},
                 {}};
  const std::string hash = cfg.hash();
  const Topology& topo = cfg.scenario.topology;
  for (std::uint64_t seed : cfg.seeds) {
    const OracleResult best = exhaustive_oracle(cfg.scenario, cfg.env.num_elements, cfg.env.phase_levels,
                                                cfg.eval_draws, SeedStreams(seed).eval, cfg.oracle_ceiling);
    const Position ris = grid_center(best.cell, topo.area_side, topo.grid_count);
    table.rows.push_back({hash, std::to_string(seed), std::to_string(cfg.env.num_elements), std::to_string(best.cell),
                          num(ris.x()), num(ris.y()), steps_string(best.phase), num(best.sum_rate.mean),
                          num(best.sum_rate.std_error), std::to_string(best.evaluations)});
  }
  return table;
}

CsvTable run_eval(const ExperimentConfig& cfg, const EvalOptions& options) {
  cfg.validate();
  if ((options.load_checkpoint || options.save_checkpoint) &&
      (cfg.seeds.size() != 1 || cfg.agents.size() != 1 ||
       (cfg.agents.front() != AgentKind::cnn_dqn && cfg.agents.front() != AgentKind::fc_dqn))) {
    throw ConfigError("checkpoints need exactly one seed and one agent of type cnn_dqn or fc_dqn");
  }
  CsvTable table{{"config_hash", "seed", "agent", "cell", "ris_x", "ris_y", "phase_steps", "score", "mean_sum_rate",
                  "stderr"},
                 {}};
  const std::string hash = cfg.hash();
  const Topology& topo = cfg.scenario.topology;
  for (std::uint64_t seed : cfg.seeds) {
    for (AgentKind agent : cfg.agents) {
      Placement placement;
      if (options.load_checkpoint) {
        const nn::QNetwork<double> net = nn::load_checkpoint(*options.load_checkpoint);
        SeedStreams streams(seed);
        RisEnvironment env(cfg.scenario, cfg.env, streams.env);
        if (!(net.arch() == network_arch(agent, cfg, env))) {
          throw ConfigError("checkpoint architecture does not match the configured agent and scenario");
        }
        placement = placement_from_rollout(env, greedy_policy(net), cfg, streams);
      } else {
        AgentOutcome run = run_agent(agent, cfg, cfg.scenario, cfg.env, seed);
        if (options.save_checkpoint) nn::save_checkpoint(*options.save_checkpoint, *run.network);
        placement = run.placement;
      }
      const Position ris = grid_center(placement.cell, topo.area_side, topo.grid_count);
      table.rows.push_back({hash, std::to_string(seed), std::string(to_string(agent)), std::to_string(placement.cell),
                            num(ris.x()), num(ris.y()), steps_string(placement.phase), num(placement.score),
                            num(placement.sum_rate.mean), num(placement.sum_rate.std_error)});
    }
  }
  return table;
}

}  // namespace risd2d
