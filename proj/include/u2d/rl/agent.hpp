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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "u2d/rl/environment.hpp"
#include "u2d/rl/qnetwork.hpp"
#include "u2d/rl/replay_memory.hpp"

namespace u2d::rl {

struct AgentConfig {
  std::vector<int> hidden{500, 250, 120};
  double alpha_initial = 1e-3;
  double alpha_decay = 0.999;  // per cycle
  double alpha_floor = 1e-5;
  double epsilon_start = 1.0;
  double epsilon_end = 0.1;
  double epsilon_decay_fraction = 0.8;  // of all training cycles
  double rho = 0.9;
  int tau = 30;  // gradient updates between target copies
  int batch_size = 50;
  int memory_capacity = 3000;
  int cycles_per_episode = 30;
  ObservationMode observation = ObservationMode::kFull;
  int eval_every = 10;  // episodes; 0 disables greedy evaluation

  static AgentConfig for_scenario(const Scenario& s);

  double alpha(std::int64_t cycle) const;
  double epsilon(std::int64_t cycle, std::int64_t total_cycles) const;
  std::vector<int> layer_sizes(int input_size) const;
};

// Hidden layouts for Z in {0, 1, 3, 5}.
std::vector<int> hidden_layers_for(int z);

// Greedy branch takes the lowest index among maximal values.
int greedy_action(const Eigen::VectorXd& q, const ActionSet& available);

int select_action(const QNetwork& net, const Eigen::VectorXd& state, const ActionSet& available,
                  double epsilon, Rng& rng);

double compute_target(double reward, const Eigen::VectorXd& next_state, const QNetwork& target_net,
                      const ActionSet& available, double rho);

// Copies when step is a positive multiple of tau; returns whether it copied.
bool sync_target(const QNetwork& net, QNetwork& target_net, std::int64_t step, int tau);

class DqnAgent {
 public:
  DqnAgent(int input_size, const AgentConfig& config, std::uint64_t seed);

  int act(const Eigen::VectorXd& state, const ActionSet& available, double epsilon);
  void remember(Experience e) { memory_.push(std::move(e)); }
  // Mean squared TD error of the batch, or nothing while memory < batch size.
  std::optional<double> learn(double learning_rate);

  const QNetwork& online() const { return online_; }
  QNetwork& online() { return online_; }
  const QNetwork& target() const { return target_; }
  const ReplayMemory& memory() const { return memory_; }
  std::int64_t updates() const { return updates_; }

 private:
  AgentConfig config_;
  QNetwork online_;
  QNetwork target_;
  ReplayMemory memory_;
  Rng explore_rng_;
  Rng replay_rng_;
  std::int64_t updates_ = 0;
};

}  // namespace u2d::rl
