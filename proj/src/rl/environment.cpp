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

#include "u2d/rl/environment.hpp"

#include <stdexcept>

namespace u2d::rl {

int observation_size(const Scenario& s, ObservationMode mode) {
  return mode == ObservationMode::kOwn ? 3 : 3 * s.n_uavs();
}

Eigen::VectorXd encode_state(const Scenario& s, const std::vector<Vec3>& positions, int agent,
                             ObservationMode mode) {
  Eigen::VectorXd v(observation_size(s, mode));
  Eigen::Index k = 0;
  auto put = [&](const Vec3& p) {
    v(k++) = (p.x - s.bs_pos.x) / s.cell_radius;
    v(k++) = (p.y - s.bs_pos.y) / s.cell_radius;
    v(k++) = p.z / s.h_max;
  };
  put(positions.at(static_cast<std::size_t>(agent)));
  if (mode == ObservationMode::kFull) {
    for (int j = 0; j < s.n_uavs(); ++j) {
      if (j != agent) put(positions[static_cast<std::size_t>(j)]);
    }
  }
  return v;
}

Environment::Environment(const Scenario& s, ModeSplit split) : scenario_(s), links_(s, split) { reset(); }

void Environment::reset() {
  positions_.clear();
  for (const auto& u : scenario_.uavs) positions_.push_back(u.init_pos);
}

ActionSet Environment::available(int uav) const {
  return available_actions(positions_.at(static_cast<std::size_t>(uav)), scenario_);
}

Eigen::VectorXd Environment::observe(int agent, ObservationMode mode) const {
  return encode_state(scenario_, positions_, agent, mode);
}

StepResult Environment::step(const std::vector<int>& actions) {
  if (static_cast<int>(actions.size()) != scenario_.n_uavs()) {
    throw std::invalid_argument("one action per UAV is required");
  }
  std::vector<Vec3> next = positions_;
  for (int i = 0; i < scenario_.n_uavs(); ++i) {
    const int a = actions[static_cast<std::size_t>(i)];
    if (!available(i).contains(a)) {
      throw std::domain_error("UAV " + std::to_string(i) + ": action " + std::to_string(a) + " is not available");
    }
    next[static_cast<std::size_t>(i)] =
        positions_[static_cast<std::size_t>(i)] + action_from_index(a).displacement(scenario_.delta);
  }
  StepResult r;
  r.outcome = evaluate(positions_, next);
  for (const auto& o : r.outcome) r.rewards.push_back(o.reward);
  positions_ = std::move(next);
  return r;
}

CycleOutcome Environment::evaluate(const std::vector<Vec3>& prev, const std::vector<Vec3>& next) {
  return cycle_outcome(scenario_, prev, next, links_);
}

}  // namespace u2d::rl
