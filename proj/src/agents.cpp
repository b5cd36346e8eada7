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

#include "risd2d/agents.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace risd2d {

LrSchedule parse_lr_schedule(std::string_view name) {
  if (name == "constant") return LrSchedule::constant;
  if (name == "inverse") return LrSchedule::inverse;
  if (name == "literal") return LrSchedule::literal;
  throw std::invalid_argument("unknown lr schedule '" + std::string(name) + "' (expected constant|inverse|literal)");
}

std::string_view to_string(LrSchedule schedule) {
  switch (schedule) {
    case LrSchedule::constant: return "constant";
    case LrSchedule::inverse: return "inverse";
    case LrSchedule::literal: return "literal";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("train: iterations must be >= 0");
  if (episode_horizon < 1) throw std::invalid_argument("train: episode_horizon must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("train: gamma must lie in [0, 1)");
  if (!(eps_start >= 0.0 && eps_start <= eps_max && eps_max <= 1.0)) {
    throw std::invalid_argument("train: requires 0 <= eps_start <= eps_max <= 1");
  }
  if (eps_step < 0.0) throw std::invalid_argument("train: eps_step must be >= 0");
  if (minibatch_size < 1 || minibatch_size > replay_capacity) {
    throw std::invalid_argument("train: requires 1 <= minibatch_size <= replay_capacity");
  }
  if (target_update_period < 1) throw std::invalid_argument("train: target_update_period must be >= 1");
  if (!(lr_base >= 0.0)) throw std::invalid_argument("train: lr_base must be >= 0");
}

double epsilon_at(int iteration, const TrainConfig& cfg) {
  return std::min(cfg.eps_start + iteration * cfg.eps_step, cfg.eps_max);
}

double learning_rate(int iteration, const TrainConfig& cfg) {
  switch (cfg.lr_schedule) {
    case LrSchedule::constant: return cfg.lr_base;
    case LrSchedule::inverse: return cfg.lr_base / std::max(iteration, 1);
    case LrSchedule::literal: return cfg.iterations > 0 ? 1.0 / cfg.iterations : 0.0;
  }
  return 0.0;
}

std::size_t argmax(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw std::invalid_argument("argmax: empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

std::size_t select_action(const Eigen::VectorXd& q_values, double greedy_prob, Rng& rng) {
  if (q_values.size() == 0) throw std::invalid_argument("select_action: no actions");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> uniform(0, static_cast<std::size_t>(q_values.size()) - 1);
  const double u = coin(rng);
  const std::size_t explore = uniform(rng);
  return u < greedy_prob ? argmax(q_values) : explore;
}

double q_target(double reward, const Eigen::VectorXd& q_next, double gamma) {
  return reward + gamma * q_next.maxCoeff();
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  entries_.reserve(capacity_);
}

void ReplayBuffer::push(Transition transition) {
  if (entries_.size() < capacity_) {
    entries_.push_back(std::move(transition));
  } else {
    entries_[inserted_ % capacity_] = std::move(transition);
  }
  ++inserted_;
}

const Transition& ReplayBuffer::at(std::size_t age_rank) const {
  if (age_rank >= entries_.size()) throw std::out_of_range("ReplayBuffer::at");
  const std::size_t oldest = entries_.size() < capacity_ ? 0 : inserted_ % capacity_;
  return entries_[(oldest + age_rank) % entries_.size()];
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
  if (entries_.empty()) throw std::logic_error("ReplayBuffer::sample on empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, entries_.size() - 1);
  return entries_[pick(rng)];
}

void log_iteration(MetricsLog& log, std::size_t action, double reward, double loss, double epsilon) {
  IterationRecord rec;
  rec.iteration = static_cast<int>(log.size()) + 1;
  rec.action = action;
  rec.reward = reward;
  const double previous = log.empty() ? 0.0 : log.back().running_avg * (rec.iteration - 1);
  rec.running_avg = (previous + reward) / rec.iteration;
  rec.loss = loss;
  rec.epsilon = epsilon;
  log.push_back(rec);
}

DqnResult dqn_train(Environment& env, const nn::NetworkArch& arch, const TrainConfig& cfg, Rng& rng,
                    const DqnHooks& hooks) {
  cfg.validate();
  if (arch.output_units != static_cast<nn::Index>(env.action_count())) {
    throw std::invalid_argument("dqn_train: network has " + std::to_string(arch.output_units) +
                                " outputs but the environment has " + std::to_string(env.action_count()) +
                                " actions");
  }
  if (arch.columns != env.state_columns()) {
    throw std::invalid_argument("dqn_train: network input width does not match the state matrix");
  }

  DqnResult result{nn::QNetwork<double>(arch), {}};
  nn::QNetwork<double>& online = result.network;
  // Initialization draws from a fork so exploration and replay sampling see
  // the same stream regardless of the parameter count.
  Rng init_rng(rng());
  nn::init_weights(online, init_rng);
  nn::QNetwork<double> target = online;
  ReplayBuffer replay(cfg.replay_capacity);
  nn::Gradients<double> grads = nn::Gradients<double>::zeros(arch);
  result.log.reserve(static_cast<std::size_t>(cfg.iterations));

  double warmup_sum = 0.0;
  double baseline = 0.0;
  StateMatrix state = env.reset();
  for (int t = 0; t < cfg.iterations; ++t) {
    const double eps = epsilon_at(t, cfg);
    const std::size_t action = select_action(nn::forward(online, state), eps, rng);
    StepResult step = env.step(action);
    replay.push({state, action, step.reward, step.next});

    double loss = 0.0;
    if (t < static_cast<int>(cfg.minibatch_size)) {
      warmup_sum += step.reward;
      if (cfg.center_rewards && t + 1 == static_cast<int>(cfg.minibatch_size)) {
        baseline = warmup_sum / static_cast<double>(cfg.minibatch_size);
      }
    }
    if (replay.size() >= cfg.minibatch_size) {
      grads.set_zero();
      const double weight = 1.0 / static_cast<double>(cfg.minibatch_size);
      for (std::size_t j = 0; j < cfg.minibatch_size; ++j) {
        const Transition& tr = replay.sample(rng);
        const double y = q_target(tr.reward - baseline, nn::forward(target, tr.next), cfg.gamma);
        loss += weight * nn::accumulate_gradient(online, tr.state, static_cast<nn::Index>(tr.action), y, grads, weight);
      }
      nn::sgd_step(online, grads, learning_rate(t + 1, cfg));
    }
    if ((t + 1) % cfg.target_update_period == 0) target = online;

    state = std::move(step.next);
    if ((t + 1) % cfg.episode_horizon == 0) state = env.reset();
    log_iteration(result.log, action, step.reward, loss, eps);
    if (hooks.after_step) hooks.after_step(t, online, target);
  }
  return result;
}

Eigen::VectorXd& QTable::row(const std::vector<int>& key) {
  auto it = rows_.find(key);
  if (it == rows_.end()) {
    it = rows_.emplace(key, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(action_count_))).first;
  }
  return it->second;
}

Eigen::VectorXd QTable::values(const std::vector<int>& key) const {
  const auto it = rows_.find(key);
  return it == rows_.end() ? Eigen::VectorXd::Zero(static_cast<Eigen::Index>(action_count_)) : it->second;
}

QLearningResult qlearning_train(Environment& env, const TrainConfig& cfg, Rng& rng) {
  cfg.validate();
  if (env.state_space_size() > cfg.table_ceiling) {
    throw CapacityError("tabular Q-learning: " + std::to_string(env.state_space_size()) +
                        " discrete states exceed the table ceiling of " + std::to_string(cfg.table_ceiling) +
                        "; use fewer RIS elements");
  }
  QLearningResult result{QTable(env.action_count()), {}};
  QTable& table = result.table;
  result.log.reserve(static_cast<std::size_t>(cfg.iterations));

  env.reset();
  for (int t = 0; t < cfg.iterations; ++t) {
    const double eps = epsilon_at(t, cfg);
    const std::vector<int> key = env.state_key();
    const std::size_t action = select_action(table.values(key), eps, rng);
    const StepResult step = env.step(action);
    const double next_best = table.values(env.state_key()).maxCoeff();
    double& q = table.row(key)[static_cast<Eigen::Index>(action)];
    const double td = step.reward + cfg.gamma * next_best - q;
    q += learning_rate(t + 1, cfg) * td;

    if ((t + 1) % cfg.episode_horizon == 0) env.reset();
    log_iteration(result.log, action, step.reward, 0.5 * td * td, eps);
  }
  return result;
}

MetricsLog random_policy(Environment& env, int iterations, int episode_horizon, Rng& rng) {
  if (episode_horizon < 1) throw std::invalid_argument("random_policy: episode_horizon must be >= 1");
  MetricsLog log;
  log.reserve(static_cast<std::size_t>(std::max(iterations, 0)));
  std::uniform_int_distribution<std::size_t> uniform(0, env.action_count() - 1);
  env.reset();
  for (int t = 0; t < iterations; ++t) {
    const std::size_t action = uniform(rng);
    const StepResult step = env.step(action);
    if ((t + 1) % episode_horizon == 0) env.reset();
    log_iteration(log, action, step.reward, 0.0, 0.0);
  }
  return log;
}

GreedyPolicy greedy_policy(const nn::QNetwork<double>& net) {
  return [&net](const Environment& env) { return argmax(nn::forward(net, env.state())); };
}

GreedyPolicy greedy_policy(const QTable& table) {
  return [&table](const Environment& env) { return argmax(table.values(env.state_key())); };
}

ConfigurationScore evaluate_configuration(const Scenario& scenario, const PhaseConfig& phase, int cell,
                                          int draws, const Rng& stream) {
  if (draws < 1) throw std::invalid_argument("evaluate_configuration: draws must be >= 1");
  const Topology& topo = scenario.topology;
  const Position ris = grid_center(cell, topo.area_side, topo.grid_count);
  const Eigen::VectorXcd coefficients = phase.coefficients();
  Rng rng = stream;
  MeanAccumulator reward_acc;
  MeanAccumulator rate_acc;
  for (int d = 0; d < draws; ++d) {
    const auto real = realize_channels(topo, ris, phase.size(), scenario.channel, rng);
    const StepScore s = score_realization(scenario, real, coefficients);
    reward_acc.add(s.reward);
    rate_acc.add(s.info.sum_rate);
  }
  return {reward_acc.mean(), rate_acc.estimate()};
}

Placement greedy_placement(RisEnvironment& env, const GreedyPolicy& policy, int horizon, int eval_draws,
                           const Rng& eval_stream) {
  std::vector<std::pair<PhaseConfig, int>> visited;
  std::set<std::vector<int>> seen;
  auto remember = [&]() {
    if (seen.insert(env.state_key()).second) visited.emplace_back(env.phase(), env.cell());
  };
  env.reset();
  remember();
  for (int t = 0; t < horizon; ++t) {
    env.step(policy(env));
    remember();
  }

  Placement best;
  bool have = false;
  for (const auto& [phase, cell] : visited) {
    const ConfigurationScore s = evaluate_configuration(env.scenario(), phase, cell, eval_draws, eval_stream);
    if (!have || s.reward > best.score) {
      best.phase = phase;
      best.cell = cell;
      best.score = s.reward;
      best.sum_rate = s.sum_rate;
      have = true;
    }
  }
  best.distinct_visited = visited.size();
  return best;
}

}  // namespace risd2d
