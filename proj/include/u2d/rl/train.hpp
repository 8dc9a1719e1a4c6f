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

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "u2d/csv.hpp"
#include "u2d/rl/agent.hpp"
#include "u2d/rl/policy.hpp"

namespace u2d::rl {

struct EpisodeMetrics {
  int episode = 0;
  double utility_discounted = 0.0;
  double utility_raw = 0.0;
  double epsilon = 0.0;  // at the episode's first cycle
  double alpha = 0.0;
  std::vector<double> mean_td_loss;  // [agent], NaN before the first update
};

struct GreedyEvaluation {
  int episode = 0;
  double utility_discounted = 0.0;
  double utility_raw = 0.0;
};

struct TrainOptions {
  int episodes = 150;
  std::uint64_t seed = 0;
  int workers = 1;  // agents learn concurrently when > 1
  ModeSplit split = ModeSplit::kIndependent;
  std::function<void(const EpisodeMetrics&)> on_episode;
};

struct TrainResult {
  std::vector<QNetwork> policies;
  std::vector<EpisodeMetrics> metrics;
  std::vector<GreedyEvaluation> evaluations;
  std::vector<ReplayMemory> memories;  // [agent], filled only when requested
};

TrainResult train(const Scenario& s, const AgentConfig& config, const TrainOptions& options);

// Also keeps every agent's final replay memory.
TrainResult train_keep_memory(const Scenario& s, const AgentConfig& config, const TrainOptions& options);

CsvTable metrics_table(const std::vector<EpisodeMetrics>& metrics, int n_agents);
CsvTable evaluation_table(const std::vector<GreedyEvaluation>& evaluations);

}  // namespace u2d::rl
