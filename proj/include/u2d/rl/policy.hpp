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

#include <functional>
#include <string>
#include <vector>

#include "u2d/rl/environment.hpp"
#include "u2d/rl/qnetwork.hpp"

namespace u2d::rl {

// Chooses an action for one agent from the current environment state.
using PolicyFn = std::function<int(int agent, const Environment& env, Rng& rng)>;

enum class BaselineKind { kRandomWalk, kStationary };

BaselineKind parse_baseline(const std::string& name);

PolicyFn baseline_policy(BaselineKind kind);

PolicyFn greedy_policy(const std::vector<QNetwork>& nets, ObservationMode mode);

struct EpisodeResult {
  double utility_discounted = 0.0;  // sum_i sum_c rho^c r_i
  double utility_raw = 0.0;
  std::vector<std::vector<Vec3>> trajectories;  // [uav][cycle 0..C], index 0 = start
  std::vector<std::vector<double>> rewards;     // [uav][cycle]
};

// Resets the environment, then runs `cycles` cycles.
EpisodeResult run_episode(Environment& env, const PolicyFn& policy, int cycles, double rho, Rng& rng);

}  // namespace u2d::rl
