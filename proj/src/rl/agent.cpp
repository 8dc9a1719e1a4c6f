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

#include "u2d/rl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace u2d::rl {

AgentConfig AgentConfig::for_scenario(const Scenario& s) {
  AgentConfig c;
  c.rho = s.discount;
  return c;
}

double AgentConfig::alpha(std::int64_t cycle) const {
  return std::max(alpha_floor, alpha_initial * std::pow(alpha_decay, static_cast<double>(cycle)));
}

double AgentConfig::epsilon(std::int64_t cycle, std::int64_t total_cycles) const {
  const double horizon = epsilon_decay_fraction * static_cast<double>(total_cycles);
  if (horizon <= 0.0 || static_cast<double>(cycle) >= horizon) return epsilon_end;
  return epsilon_start + (epsilon_end - epsilon_start) * static_cast<double>(cycle) / horizon;
}

std::vector<int> AgentConfig::layer_sizes(int input_size) const {
  std::vector<int> sizes{input_size};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(kNumActions);
  return sizes;
}

std::vector<int> hidden_layers_for(int z) {
  switch (z) {
    case 0: return {};
    case 1: return {250};
    case 3: return {500, 250, 120};
    case 5: return {500, 500, 250, 250, 120};
    default: throw std::invalid_argument("hidden layer count must be 0, 1, 3 or 5");
  }
}

int greedy_action(const Eigen::VectorXd& q, const ActionSet& available) {
  int best = -1;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int a : available.indices()) {
    if (best < 0 || q(a) > best_q) {
      best = a;
      best_q = q(a);
    }
  }
  if (best < 0) throw std::invalid_argument("no available actions");
  return best;
}

int select_action(const QNetwork& net, const Eigen::VectorXd& state, const ActionSet& available,
                  double epsilon, Rng& rng) {
  if (available.empty()) throw std::invalid_argument("no available actions");
  if (uniform01(rng) < epsilon) {
    const auto idx = available.indices();
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    return idx[pick(rng)];
  }
  return greedy_action(net.forward(state), available);
}

double compute_target(double reward, const Eigen::VectorXd& next_state, const QNetwork& target_net,
                      const ActionSet& available, double rho) {
  const Eigen::VectorXd q = target_net.forward(next_state);
  return reward + rho * q(greedy_action(q, available));
}

bool sync_target(const QNetwork& net, QNetwork& target_net, std::int64_t step, int tau) {
  if (tau <= 0 || step <= 0 || step % tau != 0) return false;
  target_net = net;
  return true;
}

DqnAgent::DqnAgent(int input_size, const AgentConfig& config, std::uint64_t seed)
    : config_(config),
      memory_(config.memory_capacity),
      explore_rng_(derive_seed(seed, 1)),
      replay_rng_(derive_seed(seed, 2)) {
  Rng init_rng(derive_seed(seed, 0));
  online_ = QNetwork::glorot(config.layer_sizes(input_size), init_rng);
  target_ = online_;
}

int DqnAgent::act(const Eigen::VectorXd& state, const ActionSet& available, double epsilon) {
  return select_action(online_, state, available, epsilon, explore_rng_);
}

std::optional<double> DqnAgent::learn(double learning_rate) {
  const int d = config_.batch_size;
  if (memory_.size() < d || d < 1) return std::nullopt;
  const auto idx = memory_.sample_indices(d, replay_rng_);

  Eigen::MatrixXd next(online_.input_size(), d);
  for (int j = 0; j < d; ++j) next.col(j) = memory_.at(idx[static_cast<std::size_t>(j)]).next_state;
  const Eigen::MatrixXd q_next = target_.forward_batch(next);

  std::vector<TrainingSample> batch;
  batch.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const Experience& e = memory_.at(idx[static_cast<std::size_t>(j)]);
    const Eigen::VectorXd q = q_next.col(j);
    const double y = e.reward + config_.rho * q(greedy_action(q, e.next_available));
    batch.push_back({e.state, e.action, y});
  }
  double loss = 0.0;
  const Gradient g = online_.gradient(batch, &loss);
  online_.apply(g, learning_rate);
  if (!online_.finite()) throw std::runtime_error("non-finite network weights after update");
  ++updates_;
  sync_target(online_, target_, updates_, config_.tau);
  return loss / d;
}

}  // namespace u2d::rl
