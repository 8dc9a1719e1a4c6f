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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "u2d/protocol.hpp"
#include "u2d/scenario.hpp"

namespace u2d::rl {

inline constexpr std::int64_t kMaxTabularStates = 10000;

// Deterministic finite MDP with per-state action masks.
struct FiniteMdp {
  int n_states = 0;
  int n_actions = 0;
  int start_state = 0;
  double discount = 0.9;
  std::function<std::vector<int>(int state)> actions;
  std::function<std::pair<int, double>(int state, int action)> step;  // next state, reward
};

class StateSpaceTooLarge : public std::runtime_error {
 public:
  explicit StateSpaceTooLarge(std::int64_t states)
      : std::runtime_error("joint state space has " + std::to_string(states) + " entries, limit is " +
                           std::to_string(kMaxTabularStates)),
        states_(states) {}
  std::int64_t states() const { return states_; }

 private:
  std::int64_t states_;
};

// Joint lattice MDP reachable from the initial positions. A joint action is
// the mixed-radix index of the per-UAV lattice actions; the reward is the sum
// of per-UAV rewards.
struct ScenarioMdp {
  FiniteMdp mdp;
  std::vector<std::vector<Vec3>> states;  // [state][uav]

  int state_of(const std::vector<Vec3>& positions) const;
};

ScenarioMdp scenario_mdp(const Scenario& s, ModeSplit split = ModeSplit::kIndependent);

struct TabularConfig {
  double alpha = 0.2;
  double epsilon_start = 1.0;
  double epsilon_end = 0.1;
  double epsilon_decay_fraction = 0.8;
  int cycles_per_episode = 30;
};

struct TabularResult {
  std::vector<std::vector<double>> q;  // [state][action], unavailable entries NaN
  std::vector<int> policy;             // greedy, lowest index on ties
};

TabularResult tabular_q(const FiniteMdp& mdp, const TabularConfig& config, int episodes, std::uint64_t seed);

TabularResult tabular_q(const Scenario& s, const TabularConfig& config, int episodes, std::uint64_t seed);

TabularResult value_iteration(const FiniteMdp& mdp, double tolerance = 1e-12, int max_sweeps = 100000);

std::vector<int> greedy_policy_from_q(const std::vector<std::vector<double>>& q);

}  // namespace u2d::rl
