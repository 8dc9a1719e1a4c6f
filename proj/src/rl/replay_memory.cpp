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

#include "u2d/rl/replay_memory.hpp"

#include <numeric>
#include <stdexcept>

namespace u2d::rl {

ReplayMemory::ReplayMemory(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("replay capacity must be positive");
  items_.reserve(static_cast<std::size_t>(capacity));
}

void ReplayMemory::push(Experience e) {
  if (size() < capacity_) {
    items_.push_back(std::move(e));
  } else {
    items_[static_cast<std::size_t>(next_)] = std::move(e);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<int> ReplayMemory::sample_indices(int batch_size, Rng& rng) const {
  if (batch_size < 0 || batch_size > size()) throw std::invalid_argument("batch larger than memory");
  std::vector<int> idx(static_cast<std::size_t>(size()));
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < batch_size; ++k) {
    std::uniform_int_distribution<int> pick(k, size() - 1);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(batch_size));
  return idx;
}

}  // namespace u2d::rl
