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

#include "u2d/rng.hpp"
#include "u2d/scenario.hpp"

namespace u2d::rl {

struct Experience {
  Eigen::VectorXd state;       // encoded for the owning agent
  ActionSet available;         // actions available at state
  int action = kStayAction;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  ActionSet next_available;
};

class ReplayMemory {
 public:
  explicit ReplayMemory(int capacity);

  void push(Experience e);
  int size() const { return static_cast<int>(items_.size()); }
  int capacity() const { return capacity_; }
  const Experience& at(int i) const { return items_[static_cast<std::size_t>(i)]; }

  // Distinct slots chosen uniformly; batch_size must not exceed size().
  std::vector<int> sample_indices(int batch_size, Rng& rng) const;

 private:
  int capacity_;
  int next_ = 0;
  std::vector<Experience> items_;
};

}  // namespace u2d::rl
