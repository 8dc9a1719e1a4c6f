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

#include "u2d/rl/train.hpp"

#include <cmath>
#include <limits>
#include <thread>

namespace u2d::rl {

namespace {

TrainResult run_training(const Scenario& s, const AgentConfig& config, const TrainOptions& options,
                         bool keep_memory) {
  const int n = s.n_uavs();
  const int obs = observation_size(s, config.observation);
  std::vector<DqnAgent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    agents.emplace_back(obs, config, derive_seed(options.seed, static_cast<std::uint64_t>(100 + i)));
  }
  Environment env(s, options.split);
  Environment eval_env(s, options.split);
  Rng eval_rng(derive_seed(options.seed, 99));

  const std::int64_t total_cycles =
      static_cast<std::int64_t>(options.episodes) * config.cycles_per_episode;
  std::int64_t cycle = 0;
  TrainResult result;

  for (int ep = 1; ep <= options.episodes; ++ep) {
    env.reset();
    EpisodeMetrics m;
    m.episode = ep;
    m.epsilon = config.epsilon(cycle, total_cycles);
    m.alpha = config.alpha(cycle);
    std::vector<double> loss_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<int> loss_count(static_cast<std::size_t>(n), 0);
    double weight = 1.0;

    for (int c = 0; c < config.cycles_per_episode; ++c, ++cycle) {
      const double eps = config.epsilon(cycle, total_cycles);
      const double lr = config.alpha(cycle);
      std::vector<Eigen::VectorXd> states;
      std::vector<ActionSet> avail;
      std::vector<int> actions;
      for (int i = 0; i < n; ++i) {
        states.push_back(env.observe(i, config.observation));
        avail.push_back(env.available(i));
        actions.push_back(agents[static_cast<std::size_t>(i)].act(states.back(), avail.back(), eps));
      }
      const StepResult step = env.step(actions);

      auto learn_one = [&](int i) {
        const auto ui = static_cast<std::size_t>(i);
        agents[ui].remember({states[ui], avail[ui], actions[ui], step.rewards[ui],
                             env.observe(i, config.observation), env.available(i)});
        if (auto loss = agents[ui].learn(lr)) {
          loss_sum[ui] += *loss;
          ++loss_count[ui];
        }
      };
      if (options.workers > 1 && n > 1) {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(learn_one, i);
        for (auto& t : pool) t.join();
      } else {
        for (int i = 0; i < n; ++i) learn_one(i);
      }

      double total = 0.0;
      for (double r : step.rewards) total += r;
      m.utility_discounted += weight * total;
      m.utility_raw += total;
      weight *= config.rho;
    }
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      m.mean_td_loss.push_back(loss_count[ui] ? loss_sum[ui] / loss_count[ui]
                                              : std::numeric_limits<double>::quiet_NaN());
    }
    result.metrics.push_back(m);
    if (options.on_episode) options.on_episode(m);

    if (config.eval_every > 0 && ep % config.eval_every == 0) {
      std::vector<QNetwork> nets;
      for (const auto& a : agents) nets.push_back(a.online());
      const EpisodeResult e = run_episode(eval_env, greedy_policy(nets, config.observation),
                                          config.cycles_per_episode, config.rho, eval_rng);
      result.evaluations.push_back({ep, e.utility_discounted, e.utility_raw});
    }
  }
  for (const auto& a : agents) {
    result.policies.push_back(a.online());
    if (keep_memory) result.memories.push_back(a.memory());
  }
  return result;
}

}  // namespace

TrainResult train(const Scenario& s, const AgentConfig& config, const TrainOptions& options) {
  return run_training(s, config, options, false);
}

TrainResult train_keep_memory(const Scenario& s, const AgentConfig& config, const TrainOptions& options) {
  return run_training(s, config, options, true);
}

CsvTable metrics_table(const std::vector<EpisodeMetrics>& metrics, int n_agents) {
  CsvTable t;
  std::vector<std::string> header{"episode", "total_utility_discounted", "total_utility_raw", "epsilon",
                                  "alpha"};
  for (int i = 0; i < n_agents; ++i) header.push_back("td_loss_agent_" + std::to_string(i));
  t.push_back(header);
  for (const auto& m : metrics) {
    std::vector<std::string> row{std::to_string(m.episode), format_double(m.utility_discounted),
                                 format_double(m.utility_raw), format_double(m.epsilon),
                                 format_double(m.alpha)};
    for (double l : m.mean_td_loss) row.push_back(format_double(l));
    t.push_back(row);
  }
  return t;
}

CsvTable evaluation_table(const std::vector<GreedyEvaluation>& evaluations) {
  CsvTable t{{"episode", "greedy_utility_discounted", "greedy_utility_raw"}};
  for (const auto& e : evaluations) {
    t.push_back({std::to_string(e.episode), format_double(e.utility_discounted), format_double(e.utility_raw)});
  }
  return t;
}

}  // namespace u2d::rl
