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
#include <vector>

#include "u2d/protocol.hpp"
#include "u2d/scenario.hpp"

namespace u2d::rl {

enum class ObservationMode { kFull, kOwn };

int observation_size(const Scenario& s, ObservationMode mode);

// Own coordinates first, then the other UAVs in index order. x and y are
// scaled by the cell radius, z by h_max.
Eigen::VectorXd encode_state(const Scenario& s, const std::vector<Vec3>& positions, int agent,
                             ObservationMode mode);

struct StepResult {
  CycleOutcome outcome;
  std::vector<double> rewards;
};

// One cycle per step. Link evaluations are cached for the lifetime of the environment.
class Environment {
 public:
  explicit Environment(const Scenario& s, ModeSplit split = ModeSplit::kIndependent);

  void reset();
  const Scenario& scenario() const { return scenario_; }
  const std::vector<Vec3>& positions() const { return positions_; }
  ActionSet available(int uav) const;
  Eigen::VectorXd observe(int agent, ObservationMode mode) const;

  // Throws std::domain_error when an action is not available.
  StepResult step(const std::vector<int>& actions);

  // Outcome of moving from prev to next without changing the environment.
  CycleOutcome evaluate(const std::vector<Vec3>& prev, const std::vector<Vec3>& next);

 private:
  const Scenario& scenario_;
  LinkTable links_;
  std::vector<Vec3> positions_;
};

}  // namespace u2d::rl
