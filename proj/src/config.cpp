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

#include "risd2d/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace risd2d {

namespace {

using Known = std::map<std::string, std::set<std::string>>;

const Known& known_keys() {
  static const Known keys = {
      {"scenario", {"area_side", "d2d_tx", "d2d_rx", "cell_users", "bs", "grid_count", "reuse"}},
      {"channel", {"beta", "alpha", "nakagami_shape", "nakagami_spread", "amplitude", "deterministic"}},
      {"radio", {"p_d2d", "p_cell", "noise_power", "bw_d2d", "bw_cell", "gamma_min_d2d", "gamma_min_cell"}},
      {"ris", {"num_elements", "phase_levels", "action_mode", "draws_per_step", "joint_ceiling"}},
      {"train",
       {"iterations", "episode_horizon", "gamma", "eps_start", "eps_step", "eps_max", "replay_capacity",
        "minibatch_size", "target_update_period", "lr_schedule", "lr_base", "table_ceiling",
        "center_rewards"}},
      {"network", {"conv_maps", "kernel_width", "hidden_units"}},
      {"experiment",
       {"agents", "sweep_variable", "sweep_values", "seeds", "eval_draws", "eval_horizon", "oracle_ceiling", "output"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    std::string item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(std::string_view key, const std::string& why) {
  throw ConfigError("config key '" + std::string(key) + "': " + why);
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected a number, got '" + s + "'");
  return value;
}

long long to_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    // Accept integral scientific notation such as 1e6.
    const double d = to_double(key, s);
    if (d != std::floor(d) || std::abs(d) > 9e18) fail(key, "expected an integer, got '" + s + "'");
    return static_cast<long long>(d);
  }
  return value;
}

bool to_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(key, "expected true or false, got '" + s + "'");
}

// Strips a case-sensitive unit suffix; true if it was present.
bool strip_suffix(std::string& s, std::string_view suffix) {
  if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    s.erase(s.size() - suffix.size());
    s = trim(s);
    return true;
  }
  return false;
}

std::vector<Position> to_positions(std::string_view key, std::string_view text) {
  std::vector<Position> out;
  for (const auto& item : split(text, ';')) {
    const auto xy = split(item, ',');
    if (xy.size() != 2) fail(key, "positions are 'x,y' separated by ';', got '" + item + "'");
    out.emplace_back(to_double(key, xy[0]), to_double(key, xy[1]));
  }
  return out;
}

Eigen::MatrixXi to_matrix(std::string_view key, std::string_view text) {
  const auto rows = split(text, ';');
  Eigen::MatrixXi m;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto cols = split(rows[r], ',');
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    if (static_cast<Eigen::Index>(cols.size()) != m.cols()) fail(key, "ragged matrix");
    for (std::size_t c = 0; c < cols.size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = static_cast<int>(to_integer(key, cols[c]));
    }
  }
  return m;
}

Eigen::VectorXd broadcast(std::string_view key, const std::vector<double>& values, int size) {
  if (values.size() == 1) return Eigen::VectorXd::Constant(size, values.front());
  if (static_cast<int>(values.size()) != size) {
    fail(key, "expected 1 or " + std::to_string(size) + " values, got " + std::to_string(values.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), size);
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_double(v[i]);
  return out;
}

std::string fmt_positions(const std::vector<Position>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ";" : "") + fmt_double(ps[i].x()) + "," + fmt_double(ps[i].y());
  return out;
}

}  // namespace

double parse_power(std::string_view key, std::string_view value) {
  std::string s = trim(value);
  if (strip_suffix(s, "dBm")) return dbm_to_watt(to_double(key, s));
  strip_suffix(s, "W");
  const double w = to_double(key, s);
  return w;
}

double parse_ratio(std::string_view key, std::string_view value) {
  std::string s = trim(value);
  if (strip_suffix(s, "dB")) return db_to_linear(to_double(key, s));
  return to_double(key, s);
}

AgentKind parse_agent(std::string_view name) {
  if (name == "cnn_dqn") return AgentKind::cnn_dqn;
  if (name == "fc_dqn") return AgentKind::fc_dqn;
  if (name == "qlearning") return AgentKind::qlearning;
  if (name == "random") return AgentKind::random;
  if (name == "oracle") return AgentKind::oracle;
  throw ConfigError("unknown agent '" + std::string(name) + "' (expected cnn_dqn|fc_dqn|qlearning|random|oracle)");
}

std::string_view to_string(AgentKind agent) {
  switch (agent) {
    case AgentKind::cnn_dqn: return "cnn_dqn";
    case AgentKind::fc_dqn: return "fc_dqn";
    case AgentKind::qlearning: return "qlearning";
    case AgentKind::random: return "random";
    case AgentKind::oracle: return "oracle";
  }
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "none" || name.empty()) return SweepVariable::none;
  if (name == "p_d2d_dbm") return SweepVariable::p_d2d_dbm;
  if (name == "p_cell_dbm") return SweepVariable::p_cell_dbm;
  if (name == "num_elements") return SweepVariable::num_elements;
  throw ConfigError("unknown sweep variable '" + std::string(name) +
                    "' (expected p_d2d_dbm|p_cell_dbm|num_elements)");
}

std::string_view to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::none: return "none";
    case SweepVariable::p_d2d_dbm: return "p_d2d_dbm";
    case SweepVariable::p_cell_dbm: return "p_cell_dbm";
    case SweepVariable::num_elements: return "num_elements";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.scenario.topology = Topology::reference_layout();
  cfg.scenario.channel = ChannelParams{};
  cfg.scenario.radio = RadioConfig::uniform(1, 1, dbm_to_watt(15.0), dbm_to_watt(30.0), dbm_to_watt(-116.0),
                                            db_to_linear(-10.0), db_to_linear(-13.0));
  cfg.env.num_elements = 16;
  cfg.env.phase_levels = 8;
  cfg.env.action_mode = ActionMode::factored;
  return cfg;
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
    train.validate();
    nn::NetworkArch probe{state_columns(scenario.topology.num_pairs(), scenario.topology.num_users(), env.num_elements),
                          conv, hidden_units, 1};
    probe.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (env.num_elements < 0) throw ConfigError("config key 'ris.num_elements': must be >= 0");
  if (env.phase_levels < 1) throw ConfigError("config key 'ris.phase_levels': must be >= 1");
  if (env.draws_per_step < 1) throw ConfigError("config key 'ris.draws_per_step': must be >= 1");
  if (seeds.empty()) throw ConfigError("config key 'experiment.seeds': at least one seed is required");
  if (agents.empty()) throw ConfigError("config key 'experiment.agents': at least one agent is required");
  if (eval_draws < 1) throw ConfigError("config key 'experiment.eval_draws': must be >= 1");
  if (eval_horizon < 1) throw ConfigError("config key 'experiment.eval_horizon': must be >= 1");
  if (sweep_variable == SweepVariable::num_elements) {
    for (double v : sweep_values) {
      if (v < 0 || v != std::floor(v)) throw ConfigError("config key 'experiment.sweep_values': element counts must be non-negative integers");
    }
  }
}

std::string ExperimentConfig::canonical() const {
  const Topology& t = scenario.topology;
  const ChannelParams& c = scenario.channel;
  const RadioConfig& r = scenario.radio;
  std::string agents_list;
  for (std::size_t i = 0; i < agents.size(); ++i) agents_list += (i ? "," : "") + std::string(to_string(agents[i]));
  std::string seed_list;
  for (std::size_t i = 0; i < seeds.size(); ++i) seed_list += (i ? "," : "") + std::to_string(seeds[i]);
  std::string reuse;
  for (Eigen::Index i = 0; i < t.reuse.rows(); ++i) {
    for (Eigen::Index k = 0; k < t.reuse.cols(); ++k) reuse += (k ? "," : (i ? ";" : "")) + std::to_string(t.reuse(i, k));
  }
  std::map<std::string, std::string> kv = {
      {"channel.alpha", fmt_double(c.alpha)},
      {"channel.amplitude", fmt_double(c.amplitude)},
      {"channel.beta", fmt_double(c.beta)},
      {"channel.deterministic", c.deterministic ? "true" : "false"},
      {"channel.nakagami_shape", fmt_double(c.nakagami_shape)},
      {"channel.nakagami_spread", fmt_double(c.nakagami_spread)},
      {"experiment.agents", agents_list},
      {"experiment.eval_draws", std::to_string(eval_draws)},
      {"experiment.eval_horizon", std::to_string(eval_horizon)},
      {"experiment.oracle_ceiling", std::to_string(oracle_ceiling)},
      {"experiment.seeds", seed_list},
      {"experiment.sweep_values", fmt_vector(Eigen::Map<const Eigen::VectorXd>(sweep_values.data(), static_cast<Eigen::Index>(sweep_values.size())))},
      {"experiment.sweep_variable", std::string(to_string(sweep_variable))},
      {"network.conv_maps", std::to_string(conv.num_maps)},
      {"network.hidden_units", std::to_string(hidden_units)},
      {"network.kernel_width", std::to_string(conv.kernel_width)},
      {"radio.bw_cell", fmt_vector(r.bw_cell)},
      {"radio.bw_d2d", fmt_vector(r.bw_d2d)},
      {"radio.gamma_min_cell", fmt_double(r.gamma_min_cell)},
      {"radio.gamma_min_d2d", fmt_double(r.gamma_min_d2d)},
      {"radio.noise_power", fmt_double(r.noise_power)},
      {"radio.p_cell", fmt_vector(r.p_cell)},
      {"radio.p_d2d", fmt_vector(r.p_d2d)},
      {"ris.action_mode", std::string(to_string(env.action_mode))},
      {"ris.draws_per_step", std::to_string(env.draws_per_step)},
      {"ris.joint_ceiling", std::to_string(env.joint_ceiling)},
      {"ris.num_elements", std::to_string(env.num_elements)},
      {"ris.phase_levels", std::to_string(env.phase_levels)},
      {"scenario.area_side", fmt_double(t.area_side)},
      {"scenario.bs", fmt_positions({t.bs})},
      {"scenario.cell_users", fmt_positions(t.cell_users)},
      {"scenario.d2d_rx", fmt_positions(t.d2d_rx)},
      {"scenario.d2d_tx", fmt_positions(t.d2d_tx)},
      {"scenario.grid_count", std::to_string(t.grid_count)},
      {"scenario.reuse", reuse},
      {"train.center_rewards", train.center_rewards ? "true" : "false"},
      {"train.episode_horizon", std::to_string(train.episode_horizon)},
      {"train.eps_max", fmt_double(train.eps_max)},
      {"train.eps_start", fmt_double(train.eps_start)},
      {"train.eps_step", fmt_double(train.eps_step)},
      {"train.gamma", fmt_double(train.gamma)},
      {"train.iterations", std::to_string(train.iterations)},
      {"train.lr_base", fmt_double(train.lr_base)},
      {"train.lr_schedule", std::string(to_string(train.lr_schedule))},
      {"train.minibatch_size", std::to_string(train.minibatch_size)},
      {"train.replay_capacity", std::to_string(train.replay_capacity)},
      {"train.table_ceiling", fmt_double(train.table_ceiling)},
      {"train.target_update_period", std::to_string(train.target_update_period)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const { return fmt::format("{:016x}", fnv1a(canonical())); }

ExperimentConfig parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  std::map<std::string, std::string> values;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "': keys must appear inside a [section]");
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) throw ConfigError("config section '[" + section + "]' is not recognized");
    for (const auto& [key, node] : body) {
      if (!known->second.contains(key)) throw ConfigError("config key '" + section + "." + key + "' is not recognized");
      values[section + "." + key] = trim(node.data());
    }
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  ExperimentConfig cfg = ExperimentConfig::defaults();
  Topology& topo = cfg.scenario.topology;
  if (auto v = get("scenario.area_side")) topo.area_side = to_double("scenario.area_side", *v);
  if (auto v = get("scenario.d2d_tx")) topo.d2d_tx = to_positions("scenario.d2d_tx", *v);
  if (auto v = get("scenario.d2d_rx")) topo.d2d_rx = to_positions("scenario.d2d_rx", *v);
  if (auto v = get("scenario.cell_users")) topo.cell_users = to_positions("scenario.cell_users", *v);
  if (auto v = get("scenario.bs")) {
    const auto bs = to_positions("scenario.bs", *v);
    if (bs.size() != 1) fail("scenario.bs", "expected exactly one position");
    topo.bs = bs.front();
  }
  if (auto v = get("scenario.grid_count")) topo.grid_count = static_cast<int>(to_integer("scenario.grid_count", *v));
  if (auto v = get("scenario.reuse")) {
    topo.reuse = to_matrix("scenario.reuse", *v);
  } else {
    // Pair i reuses the uplink of user i mod K.
    topo.reuse = Eigen::MatrixXi::Zero(topo.num_pairs(), topo.num_users());
    if (topo.num_users() > 0) {
      for (int i = 0; i < topo.num_pairs(); ++i) topo.reuse(i, i % topo.num_users()) = 1;
    }
  }
  const int pairs = topo.num_pairs();
  const int users = topo.num_users();

  ChannelParams& ch = cfg.scenario.channel;
  if (auto v = get("channel.beta")) ch.beta = to_double("channel.beta", *v);
  if (auto v = get("channel.alpha")) ch.alpha = to_double("channel.alpha", *v);
  if (auto v = get("channel.nakagami_shape")) ch.nakagami_shape = to_double("channel.nakagami_shape", *v);
  if (auto v = get("channel.nakagami_spread")) ch.nakagami_spread = to_double("channel.nakagami_spread", *v);
  if (auto v = get("channel.amplitude")) ch.amplitude = to_double("channel.amplitude", *v);
  if (auto v = get("channel.deterministic")) ch.deterministic = to_bool("channel.deterministic", *v);

  RadioConfig& radio = cfg.scenario.radio;
  auto powers = [&](const std::string& key, double fallback, int size) {
    std::vector<double> list;
    if (auto v = get(key)) {
      for (const auto& item : split(*v, ',')) list.push_back(parse_power(key, item));
    } else {
      list.push_back(fallback);
    }
    return broadcast(key, list, size);
  };
  auto numbers = [&](const std::string& key, double fallback, int size) {
    std::vector<double> list;
    if (auto v = get(key)) {
      for (const auto& item : split(*v, ',')) list.push_back(to_double(key, item));
    } else {
      list.push_back(fallback);
    }
    return broadcast(key, list, size);
  };
  radio.p_d2d = powers("radio.p_d2d", dbm_to_watt(15.0), pairs);
  radio.p_cell = powers("radio.p_cell", dbm_to_watt(30.0), users);
  radio.bw_d2d = numbers("radio.bw_d2d", 1.0, pairs);
  radio.bw_cell = numbers("radio.bw_cell", 1.0, users);
  if ((radio.bw_d2d.array() <= 0.0).any()) fail("radio.bw_d2d", "bandwidths must be positive");
  if ((radio.bw_cell.array() <= 0.0).any()) fail("radio.bw_cell", "bandwidths must be positive");
  if (auto v = get("radio.noise_power")) radio.noise_power = parse_power("radio.noise_power", *v);
  if (auto v = get("radio.gamma_min_d2d")) radio.gamma_min_d2d = parse_ratio("radio.gamma_min_d2d", *v);
  if (auto v = get("radio.gamma_min_cell")) radio.gamma_min_cell = parse_ratio("radio.gamma_min_cell", *v);

  EnvConfig& env = cfg.env;
  if (auto v = get("ris.num_elements")) env.num_elements = static_cast<int>(to_integer("ris.num_elements", *v));
  if (auto v = get("ris.phase_levels")) env.phase_levels = static_cast<int>(to_integer("ris.phase_levels", *v));
  if (auto v = get("ris.action_mode")) {
    try {
      env.action_mode = parse_action_mode(*v);
    } catch (const std::invalid_argument& e) {
      fail("ris.action_mode", e.what());
    }
  }
  if (auto v = get("ris.draws_per_step")) env.draws_per_step = static_cast<int>(to_integer("ris.draws_per_step", *v));
  if (auto v = get("ris.joint_ceiling")) env.joint_ceiling = static_cast<std::size_t>(to_integer("ris.joint_ceiling", *v));

  TrainConfig& tr = cfg.train;
  if (auto v = get("train.iterations")) tr.iterations = static_cast<int>(to_integer("train.iterations", *v));
  if (auto v = get("train.episode_horizon")) tr.episode_horizon = static_cast<int>(to_integer("train.episode_horizon", *v));
  if (auto v = get("train.gamma")) tr.gamma = to_double("train.gamma", *v);
  if (auto v = get("train.eps_start")) tr.eps_start = to_double("train.eps_start", *v);
  if (auto v = get("train.eps_step")) tr.eps_step = to_double("train.eps_step", *v);
  if (auto v = get("train.eps_max")) tr.eps_max = to_double("train.eps_max", *v);
  if (auto v = get("train.replay_capacity")) tr.replay_capacity = static_cast<std::size_t>(to_integer("train.replay_capacity", *v));
  if (auto v = get("train.minibatch_size")) tr.minibatch_size = static_cast<std::size_t>(to_integer("train.minibatch_size", *v));
  if (auto v = get("train.target_update_period")) tr.target_update_period = static_cast<int>(to_integer("train.target_update_period", *v));
  if (auto v = get("train.lr_schedule")) {
    try {
      tr.lr_schedule = parse_lr_schedule(*v);
    } catch (const std::invalid_argument& e) {
      fail("train.lr_schedule", e.what());
    }
  }
  if (auto v = get("train.lr_base")) tr.lr_base = to_double("train.lr_base", *v);
  if (auto v = get("train.table_ceiling")) tr.table_ceiling = to_double("train.table_ceiling", *v);
  if (auto v = get("train.center_rewards")) tr.center_rewards = to_bool("train.center_rewards", *v);

  if (auto v = get("network.conv_maps")) cfg.conv.num_maps = to_integer("network.conv_maps", *v);
  if (auto v = get("network.kernel_width")) cfg.conv.kernel_width = to_integer("network.kernel_width", *v);
  if (auto v = get("network.hidden_units")) cfg.hidden_units = to_integer("network.hidden_units", *v);

  if (auto v = get("experiment.agents")) {
    cfg.agents.clear();
    for (const auto& name : split(*v, ',')) cfg.agents.push_back(parse_agent(name));
  }
  if (auto v = get("experiment.sweep_variable")) cfg.sweep_variable = parse_sweep_variable(*v);
  if (auto v = get("experiment.sweep_values")) {
    for (const auto& item : split(*v, ',')) cfg.sweep_values.push_back(to_double("experiment.sweep_values", item));
  }
  if (auto v = get("experiment.seeds")) {
    cfg.seeds.clear();
    for (const auto& item : split(*v, ',')) {
      const long long s = to_integer("experiment.seeds", item);
      if (s < 0) fail("experiment.seeds", "seeds must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (auto v = get("experiment.eval_draws")) cfg.eval_draws = static_cast<int>(to_integer("experiment.eval_draws", *v));
  if (auto v = get("experiment.eval_horizon")) cfg.eval_horizon = static_cast<int>(to_integer("experiment.eval_horizon", *v));
  if (auto v = get("experiment.oracle_ceiling")) cfg.oracle_ceiling = static_cast<std::size_t>(to_integer("experiment.oracle_ceiling", *v));
  if (auto v = get("experiment.output")) cfg.output = *v;

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace risd2d
