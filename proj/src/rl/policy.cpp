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

#include "u2d/rl/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "u2d/rl/agent.hpp"

namespace u2d::rl {

BaselineKind parse_baseline(const std::string& name) {
  if (name == "random-walk") return BaselineKind::kRandomWalk;
  if (name == "stationary") return BaselineKind::kStationary;
  throw std::invalid_argument("unknown baseline '" + name + "'");
}

PolicyFn baseline_policy(BaselineKind kind) {
  if (kind == BaselineKind::kStationary) {
    return [](int, const Environment&, Rng&) { return kStayAction; };
  }
  return [](int agent, const Environment& env, Rng& rng) {
    const auto idx = env.available(agent).indices();
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    return idx[pick(rng)];
  };
}

PolicyFn greedy_policy(const std::vector<QNetwork>& nets, ObservationMode mode) {
  return [&nets, mode](int agent, const Environment& env, Rng&) {
    const QNetwork& net = nets.at(static_cast<std::size_t>(agent));
    return greedy_action(net.forward(env.observe(agent, mode)), env.available(agent));
  };
}

EpisodeResult run_episode(Environment& env, const PolicyFn& policy, int cycles, double rho, Rng& rng) {
  env.reset();
  const int n = env.scenario().n_uavs();
  EpisodeResult out;
  out.trajectories.resize(static_cast<std::size_t>(n));
  out.rewards.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.trajectories[static_cast<std::size_t>(i)].push_back(env.positions()[static_cast<std::size_t>(i)]);
  double weight = 1.0;
  for (int c = 0; c < cycles; ++c) {
    std::vector<int> actions;
    for (int i = 0; i < n; ++i) actions.push_back(policy(i, env, rng));
    const StepResult r = env.step(actions);
    for (int i = 0; i < n; ++i) {
      const double ri = r.rewards[static_cast<std::size_t>(i)];
      out.utility_discounted += weight * ri;
      out.utility_raw += ri;
      out.rewards[static_cast<std::size_t>(i)].push_back(ri);
      out.trajectories[static_cast<std::size_t>(i)].push_back(env.positions()[static_cast<std::size_t>(i)]);
    }
    weight *= rho;
  }
  return out;
}

}  // namespace u2d::rl
