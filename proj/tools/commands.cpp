// Copyright 2026 The u2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <optional>

#include "u2d/analysis.hpp"
#include "u2d/csv.hpp"
#include "u2d/monte_carlo.hpp"
#include "u2d/rl/tabular.hpp"
#include "u2d/rl/train.hpp"
#include "u2d/scenario.hpp"

namespace u2d::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultPlacementSeed = 20261016;

class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int episodes = 150;
  std::int64_t trials = 100000;
  int grid = 0;
  int layers = 3;
  std::string obs = "full";
  int workers = 1;
  std::string split = "independent";
  std::string policy = "greedy";
  std::string checkpoints;
  int n_uavs = 10;
  int subchannels = 0;
  int transmission_frames = -1;
  int uav = -1;
  int cycles = 30;
  int tail = 6;
  double altitude = 100.0;
  double device_distance = 500.0;
  bool collinear = false;
};

ModeSplit parse_split(const std::string& s) {
  if (s == "independent") return ModeSplit::kIndependent;
  if (s == "joint") return ModeSplit::kJoint;
  throw CLI::ValidationError("--split", "expected independent or joint");
}

rl::ObservationMode parse_obs(const std::string& s) {
  if (s == "full") return rl::ObservationMode::kFull;
  if (s == "own") return rl::ObservationMode::kOwn;
  throw CLI::ValidationError("--obs", "expected full or own");
}

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw CLI::RequiredError("--seed");
  return *o.seed;
}

Scenario require_scenario(const Options& o) {
  if (o.scenario.empty()) throw CLI::RequiredError("--scenario");
  return read_scenario_file(o.scenario);
}

Scenario scenario_or_default(const Options& o) {
  return o.scenario.empty() ? table3_scenario(kDefaultPlacementSeed) : read_scenario_file(o.scenario);
}

fs::path output_dir(const Options& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  if (!fs::is_directory(dir)) throw ValidationFailure("output path is not a directory: " + o.out);
  return dir;
}

std::vector<Vec3> init_positions(const Scenario& s) {
  std::vector<Vec3> p;
  for (const auto& u : s.uavs) p.push_back(u.init_pos);
  return p;
}

// Device and BS for the profile commands: the chosen UAV's device, or a
// device at the requested distance along +x from the BS.
Vec3 profile_device(const Scenario& s, const Options& o) {
  if (o.uav >= 0) return s.uavs.at(static_cast<std::size_t>(o.uav)).device_pos;
  return {s.bs_pos.x + o.device_distance, s.bs_pos.y, 0.0};
}

int cmd_init(const Options& o, std::ostream& out) {
  Scenario s = table3_scenario(o.seed.value_or(kDefaultPlacementSeed), o.n_uavs);
  if (o.subchannels > 0) s.n_subchannels = o.subchannels;
  if (o.transmission_frames >= 0) {
    // Keep delta consistent with the new cycle length.
    s.transmission_frames = o.transmission_frames;
    s.v_max = s.delta * std::sqrt(3.0) / (s.cycle_frames() * s.frame_duration);
  }
  for (const auto& c : check_scenario(s)) {
    if (!c.passed) throw ScenarioError(c.name, "invariant violated: " + c.detail);
  }
  const std::string text = save_scenario(s);
  if (o.out == "-" || o.out == ".") {
    out << text;
  } else {
    const fs::path path(o.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, text);
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  if (o.scenario.empty()) throw CLI::RequiredError("--scenario");
  const Scenario s = parse_scenario(read_text_file(o.scenario));
  bool all = true;
  for (const auto& c : check_scenario(s)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    all = all && c.passed;
  }
  out << (all ? "scenario valid\n" : "scenario invalid\n");
  return all ? kExitOk : kExitValidation;
}

void write_trajectories(const fs::path& path, const rl::EpisodeResult& e, int episode) {
  CsvTable t{{"episode", "uav", "cycle", "x", "y", "z", "reward"}};
  for (std::size_t i = 0; i < e.trajectories.size(); ++i) {
    for (std::size_t c = 0; c < e.trajectories[i].size(); ++c) {
      const Vec3& p = e.trajectories[i][c];
      t.push_back({std::to_string(episode), std::to_string(i), std::to_string(c), format_double(p.x),
                   format_double(p.y), format_double(p.z),
                   c == 0 ? "" : format_double(e.rewards[i][c - 1])});
    }
  }
  write_csv(path, t);
}

CsvTable containment_table(const Scenario& s, const rl::EpisodeResult& e, int tail) {
  CsvTable t{{"uav", "fraction", "tail_classification"}};
  for (int i = 0; i < s.n_uavs(); ++i) {
    const auto& traj = e.trajectories[static_cast<std::size_t>(i)];
    const auto& spec = s.uavs[static_cast<std::size_t>(i)];
    const double frac = triangle_containment(traj, s.bs_pos, spec.device_pos, spec.target_pos, s.delta);
    const int len = std::min<int>(tail, static_cast<int>(traj.size()));
    t.push_back({std::to_string(i), format_double(frac), to_string(terminal_behavior(traj, len, s.delta))});
  }
  return t;
}

rl::AgentConfig agent_config(const Scenario& s, const Options& o) {
  rl::AgentConfig cfg = rl::AgentConfig::for_scenario(s);
  cfg.hidden = rl::hidden_layers_for(o.layers);
  cfg.observation = parse_obs(o.obs);
  cfg.cycles_per_episode = o.cycles;
  return cfg;
}

int cmd_train(const Options& o, std::ostream& out) {
  const Scenario s = require_scenario(o);
  const std::uint64_t seed = require_seed(o);
  if (o.episodes < 1) throw CLI::ValidationError("--episodes", "must be at least 1");
  const fs::path dir = output_dir(o);
  const rl::AgentConfig cfg = agent_config(s, o);
  rl::TrainOptions opts;
  opts.episodes = o.episodes;
  opts.seed = seed;
  opts.workers = o.workers;
  opts.split = parse_split(o.split);
  opts.on_episode = [&](const rl::EpisodeMetrics& m) {
    out << "episode " << m.episode << " utility " << format_double(m.utility_discounted) << "\n";
  };
  const rl::TrainResult r = rl::train(s, cfg, opts);
  write_csv(dir / "metrics.csv", rl::metrics_table(r.metrics, s.n_uavs()));
  write_csv(dir / "eval.csv", rl::evaluation_table(r.evaluations));
  for (int i = 0; i < s.n_uavs(); ++i) {
    write_file_atomic(dir / ("agent_" + std::to_string(i) + ".ckpt"), r.policies[static_cast<std::size_t>(i)].save());
  }
  rl::Environment env(s, opts.split);
  Rng rng(derive_seed(seed, 5));
  const auto e = rl::run_episode(env, rl::greedy_policy(r.policies, cfg.observation), cfg.cycles_per_episode,
                                 cfg.rho, rng);
  write_trajectories(dir / "trajectory.csv", e, 0);
  write_csv(dir / "containment.csv", containment_table(s, e, o.tail));
  out << "wrote " << r.metrics.size() << " metric rows to " << (dir / "metrics.csv").string() << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Scenario s = require_scenario(o);
  const std::uint64_t seed = require_seed(o);
  const fs::path dir = output_dir(o);
  const rl::ObservationMode mode = parse_obs(o.obs);
  std::vector<rl::QNetwork> nets;
  rl::PolicyFn policy;
  if (o.policy == "greedy") {
    if (o.checkpoints.empty()) throw CLI::RequiredError("--checkpoints");
    for (int i = 0; i < s.n_uavs(); ++i) {
      nets.push_back(rl::QNetwork::load(read_text_file(fs::path(o.checkpoints) / ("agent_" + std::to_string(i) + ".ckpt"))));
      if (nets.back().input_size() != rl::observation_size(s, mode)) {
        throw ValidationFailure("checkpoint input size does not match the scenario and --obs");
      }
    }
    policy = rl::greedy_policy(nets, mode);
  } else {
    policy = rl::baseline_policy(rl::parse_baseline(o.policy));
  }
  rl::Environment env(s, parse_split(o.split));
  CsvTable summary{{"episode", "utility_discounted", "utility_raw"}};
  CsvTable traj{{"episode", "uav", "cycle", "x", "y", "z", "reward"}};
  const int episodes = std::max(1, o.episodes);
  for (int ep = 0; ep < episodes; ++ep) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(ep)));
    const auto e = rl::run_episode(env, policy, o.cycles, s.discount, rng);
    summary.push_back({std::to_string(ep), format_double(e.utility_discounted), format_double(e.utility_raw)});
    for (std::size_t i = 0; i < e.trajectories.size(); ++i) {
      for (std::size_t c = 0; c < e.trajectories[i].size(); ++c) {
        const Vec3& p = e.trajectories[i][c];
        traj.push_back({std::to_string(ep), std::to_string(i), std::to_string(c), format_double(p.x),
                        format_double(p.y), format_double(p.z),
                        c == 0 ? "" : format_double(e.rewards[i][c - 1])});
      }
    }
  }
  write_csv(dir / "simulate.csv", summary);
  write_csv(dir / "trajectory.csv", traj);
  out << "wrote " << episodes << " episodes to " << (dir / "simulate.csv").string() << "\n";
  return kExitOk;
}

int cmd_markov_verify(const Options& o, std::ostream& out) {
  const Scenario s = require_scenario(o);
  const std::uint64_t seed = require_seed(o);
  if (o.trials < 1) throw CLI::ValidationError("--trials", "must be at least 1");
  if (s.n_uavs() > 6) {
    throw ValidationFailure("markov-verify is limited to N <= 6 UAVs (scenario has " +
                            std::to_string(s.n_uavs()) + ")");
  }
  const fs::path dir = output_dir(o);
  const auto pos = init_positions(s);
  const auto rows = markov_verify(s, pos, pos, o.trials, seed, parse_split(o.split), o.workers);
  CsvTable t{{"uav", "p_u2d_exact", "p_cell_exact", "p_fail_exact", "p_u2d_mc", "p_cell_mc", "p_fail_mc",
              "trials", "z_max"}};
  double z = 0.0;
  for (const auto& r : rows) {
    t.push_back({std::to_string(r.uav), format_double(r.exact.p_u2d), format_double(r.exact.p_cell),
                 format_double(r.exact.p_fail), format_double(r.mc.p_u2d), format_double(r.mc.p_cell),
                 format_double(r.mc.p_fail), std::to_string(r.trials), format_double(r.z_max)});
    z = std::max(z, r.z_max);
  }
  write_csv(dir / "markov_verify.csv", t);
  out << "z_max " << format_double(z) << "\n";
  return kExitOk;
}

int cmd_mode_map(const Options& o, std::ostream& out) {
  const Scenario s = scenario_or_default(o);
  const fs::path dir = output_dir(o);
  const int grid = o.grid > 0 ? o.grid : 41;
  const ModeSplit split = parse_split(o.split);
  if (o.collinear) {
    CsvTable t{{"l_bd", "l_bt", "p_u2d", "p_cell", "p_fail", "label"}};
    for (const auto& c : collinear_mode_sweep(s, o.altitude, grid, split)) {
      t.push_back({format_double(c.l_bd), format_double(c.l_bt), format_double(c.modes.p_u2d),
                   format_double(c.modes.p_cell), format_double(c.modes.p_fail), to_string(c.label)});
    }
    write_csv(dir / "mode_sweep.csv", t);
    out << "wrote " << t.size() - 1 << " rows to " << (dir / "mode_sweep.csv").string() << "\n";
    return kExitOk;
  }
  CsvTable t{{"x", "y", "p_u2d", "p_cell", "p_fail", "label"}};
  for (const auto& c : mode_map(s, std::max(0, o.uav), o.altitude, grid, split)) {
    t.push_back({format_double(c.x), format_double(c.y), format_double(c.modes.p_u2d),
                 format_double(c.modes.p_cell), format_double(c.modes.p_fail), to_string(c.label)});
  }
  write_csv(dir / "mode_map.csv", t);
  out << "wrote " << t.size() - 1 << " rows to " << (dir / "mode_map.csv").string() << "\n";
  return kExitOk;
}

int cmd_profile(const Options& o, std::ostream& out) {
  const Scenario s = scenario_or_default(o);
  const fs::path dir = output_dir(o);
  const RadioModel radio = RadioModel::from_scenario(s);
  const StpProfile p = stp_profile(profile_device(s, o), s.bs_pos, o.altitude, o.grid > 0 ? o.grid : 101, radio);
  CsvTable t{{"L2D", "stp_u2d", "stp_cell"}};
  for (int k = 0; k < p.size(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    t.push_back({format_double(p.l2d[uk]), format_double(p.stp_u2d[uk]), format_double(p.stp_cell[uk])});
  }
  write_csv(dir / "profile.csv", t);
  out << (profile_monotone(p) ? "profile monotone\n" : "warning: profile not monotone\n");
  return kExitOk;
}

int cmd_switch_point(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = scenario_or_default(o);
  const fs::path dir = output_dir(o);
  const RadioModel radio = RadioModel::from_scenario(s);
  const StpProfile p = stp_profile(profile_device(s, o), s.bs_pos, o.altitude, o.grid > 0 ? o.grid : 101, radio);
  const SwitchingPoint sp = switching_point(p, radio);
  if (!sp.monotone) err << "warning: profile not monotone, bracketing the first crossing\n";
  CsvTable t{{"L2D"}};
  if (sp.l2d) t.push_back({format_double(*sp.l2d)});
  write_csv(dir / "switch_point.csv", t);
  if (sp.l2d) {
    out << "switching point L2D " << format_double(*sp.l2d) << "\n";
  } else {
    out << "no switching point\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cellular Internet of UAVs simulator with U2D overlay and DQN trajectory design", "u2d"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--scenario", o.scenario, "Scenario document");
    if (required) opt->required();
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed (u64)"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory"); };

  auto* init = app.add_subcommand("init", "Write a scenario with the default parameters");
  add_seed(init);
  init->add_option("--out", o.out, "Output file, stdout when omitted");
  init->add_option("--n-uavs", o.n_uavs, "Number of UAVs")->check(CLI::PositiveNumber);
  init->add_option("--subchannels", o.subchannels, "Number of subchannels K")->check(CLI::PositiveNumber);
  init->add_option("--transmission-frames", o.transmission_frames, "Frames in the transmission part")
      ->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "Check every scenario invariant");
  add_scenario(validate, true);

  auto* train = app.add_subcommand("train", "Train one DQN per UAV");
  add_scenario(train, true);
  add_seed(train);
  add_out(train);
  train->add_option("--episodes", o.episodes, "Training episodes");
  train->add_option("--layers", o.layers, "Hidden layer count Z")->check(CLI::IsMember({0, 1, 3, 5}));
  train->add_option("--obs", o.obs, "Observation: full or own")->check(CLI::IsMember({"full", "own"}));
  train->add_option("--workers", o.workers, "Agents learning concurrently when > 1")->check(CLI::PositiveNumber);
  train->add_option("--cycles", o.cycles, "Cycles per episode")->check(CLI::PositiveNumber);
  train->add_option("--split", o.split, "Mode split: independent or joint")->check(CLI::IsMember({"independent", "joint"}));
  train->add_option("--tail", o.tail, "Tail length for terminal behaviour")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Roll out a trained or baseline policy");
  add_scenario(simulate, true);
  add_seed(simulate);
  add_out(simulate);
  simulate->add_option("--episodes", o.episodes, "Episodes to roll out");
  simulate->add_option("--policy", o.policy, "greedy, random-walk or stationary")
      ->check(CLI::IsMember({"greedy", "random-walk", "stationary"}));
  simulate->add_option("--checkpoints", o.checkpoints, "Directory with agent_<i>.ckpt files");
  simulate->add_option("--obs", o.obs, "Observation: full or own")->check(CLI::IsMember({"full", "own"}));
  simulate->add_option("--cycles", o.cycles, "Cycles per episode")->check(CLI::PositiveNumber);
  simulate->add_option("--split", o.split, "Mode split")->check(CLI::IsMember({"independent", "joint"}));

  auto* markov = app.add_subcommand("markov-verify", "Exact transmission-part probabilities against Monte Carlo");
  add_scenario(markov, true);
  add_seed(markov);
  add_out(markov);
  markov->add_option("--trials", o.trials, "Monte Carlo trials");
  markov->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  markov->add_option("--split", o.split, "Mode split")->check(CLI::IsMember({"independent", "joint"}));

  auto* mode = app.add_subcommand("mode-map", "Per-position mode probabilities and labels");
  add_scenario(mode, false);
  add_out(mode);
  mode->add_option("--grid", o.grid, "Grid resolution per axis")->check(CLI::PositiveNumber);
  mode->add_option("--uav", o.uav, "UAV whose device is used");
  mode->add_option("--altitude", o.altitude, "UAV altitude in m");
  mode->add_option("--split", o.split, "Mode split")->check(CLI::IsMember({"independent", "joint"}));
  mode->add_flag("--collinear", o.collinear, "Sweep BS-device and BS-target distances on one ray");

  for (auto [name, help] : {std::pair{"profile", "STP profile from the device toward the BS"},
                            std::pair{"switch-point", "Location where U2D stops dominating cellular"}}) {
    auto* c = app.add_subcommand(name, help);
    add_scenario(c, false);
    add_out(c);
    c->add_option("--grid", o.grid, "Number of profile points")->check(CLI::Range(3, 1000000));
    c->add_option("--uav", o.uav, "UAV whose device is used");
    c->add_option("--altitude", o.altitude, "UAV altitude in m");
    c->add_option("--device-distance", o.device_distance, "Device distance from the BS along +x when no --uav");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "init") return cmd_init(o, out);
    if (cmd == "validate") return cmd_validate(o, out);
    if (cmd == "train") return cmd_train(o, out);
    if (cmd == "simulate") return cmd_simulate(o, out);
    if (cmd == "markov-verify") return cmd_markov_verify(o, out);
    if (cmd == "mode-map") return cmd_mode_map(o, out);
    if (cmd == "profile") return cmd_profile(o, out);
    if (cmd == "switch-point") return cmd_switch_point(o, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " (achieved tolerance " << e.achieved_tolerance() << ")\n";
    return kExitNumerical;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace u2d::cli
