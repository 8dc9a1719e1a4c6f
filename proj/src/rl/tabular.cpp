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

#include "u2d/rl/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>

#include "u2d/rng.hpp"

namespace u2d::rl {

std::vector<int> greedy_policy_from_q(const std::vector<std::vector<double>>& q) {
  std::vector<int> policy;
  for (const auto& row : q) {
    int best = -1;
    for (int a = 0; a < static_cast<int>(row.size()); ++a) {
      if (std::isnan(row[static_cast<std::size_t>(a)])) continue;
      if (best < 0 || row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(best)]) best = a;
    }
    policy.push_back(best);
  }
  return policy;
}

namespace {

std::vector<std::vector<double>> masked_table(const FiniteMdp& mdp) {
  std::vector<std::vector<double>> q(static_cast<std::size_t>(mdp.n_states),
                                     std::vector<double>(static_cast<std::size_t>(mdp.n_actions),
                                                         std::numeric_limits<double>::quiet_NaN()));
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a : mdp.actions(s)) q[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = 0.0;
  }
  return q;
}

double max_available(const std::vector<double>& row) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : row) {
    if (!std::isnan(v)) best = std::max(best, v);
  }
  return best;
}

}  // namespace

TabularResult tabular_q(const FiniteMdp& mdp, const TabularConfig& config, int episodes, std::uint64_t seed) {
  TabularResult r;
  r.q = masked_table(mdp);
  Rng rng(derive_seed(seed, 7));
  const double total = static_cast<double>(episodes) * config.cycles_per_episode;
  const double horizon = config.epsilon_decay_fraction * total;
  std::int64_t cycle = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    int s = mdp.start_state;
    for (int c = 0; c < config.cycles_per_episode; ++c, ++cycle) {
      const double eps = static_cast<double>(cycle) >= horizon
                             ? config.epsilon_end
                             : config.epsilon_start + (config.epsilon_end - config.epsilon_start) *
                                                          static_cast<double>(cycle) / horizon;
      const auto avail = mdp.actions(s);
      auto& row = r.q[static_cast<std::size_t>(s)];
      int a;
      if (uniform01(rng) < eps) {
        std::uniform_int_distribution<std::size_t> pick(0, avail.size() - 1);
        a = avail[pick(rng)];
      } else {
        a = greedy_policy_from_q({row}).front();
      }
      const auto [next, reward] = mdp.step(s, a);
      const double y = reward + mdp.discount * max_available(r.q[static_cast<std::size_t>(next)]);
      row[static_cast<std::size_t>(a)] += config.alpha * (y - row[static_cast<std::size_t>(a)]);
      s = next;
    }
  }
  r.policy = greedy_policy_from_q(r.q);
  return r;
}

TabularResult value_iteration(const FiniteMdp& mdp, double tolerance, int max_sweeps) {
  TabularResult r;
  r.q = masked_table(mdp);
  std::vector<std::vector<std::pair<int, double>>> model(static_cast<std::size_t>(mdp.n_states),
                                                         std::vector<std::pair<int, double>>(
                                                             static_cast<std::size_t>(mdp.n_actions)));
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a : mdp.actions(s)) model[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = mdp.step(s, a);
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    auto next_q = r.q;
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a : mdp.actions(s)) {
        const auto [ns, rew] = model[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
        const double v = rew + mdp.discount * max_available(r.q[static_cast<std::size_t>(ns)]);
        change = std::max(change, std::abs(v - r.q[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]));
        next_q[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = v;
      }
    }
    r.q = std::move(next_q);
    if (change <= tolerance) break;
  }
  r.policy = greedy_policy_from_q(r.q);
  return r;
}

int ScenarioMdp::state_of(const std::vector<Vec3>& positions) const {
  for (std::size_t k = 0; k < states.size(); ++k) {
    bool same = true;
    for (std::size_t i = 0; i < positions.size() && same; ++i) {
      same = distance(states[k][i], positions[i]) <= 1e-6;
    }
    if (same) return static_cast<int>(k);
  }
  return -1;
}

ScenarioMdp scenario_mdp(const Scenario& s, ModeSplit split) {
  const int n = s.n_uavs();
  // Per-UAV reachable lattice points.
  std::vector<std::vector<LatticePoint>> points(static_cast<std::size_t>(n));
  std::vector<std::map<LatticePoint, int>> point_index(static_cast<std::size_t>(n));
  std::int64_t joint = 1;
  for (int i = 0; i < n; ++i) {
    auto& pts = points[static_cast<std::size_t>(i)];
    auto& index = point_index[static_cast<std::size_t>(i)];
    std::deque<LatticePoint> frontier{LatticePoint{}};
    index[LatticePoint{}] = 0;
    pts.push_back(LatticePoint{});
    while (!frontier.empty()) {
      const LatticePoint p = frontier.front();
      frontier.pop_front();
      for (const auto& a : available_actions(s.position(i, p), s).actions()) {
        const LatticePoint q = p + a.step;
        if (index.emplace(q, static_cast<int>(pts.size())).second) {
          pts.push_back(q);
          frontier.push_back(q);
          if (static_cast<std::int64_t>(pts.size()) > kMaxTabularStates) throw StateSpaceTooLarge(joint * static_cast<std::int64_t>(pts.size()));
        }
      }
    }
    joint *= static_cast<std::int64_t>(pts.size());
    if (joint > kMaxTabularStates) throw StateSpaceTooLarge(joint);
  }
  std::int64_t joint_actions = 1;
  for (int i = 0; i < n; ++i) joint_actions *= kNumActions;
  if (joint_actions > std::numeric_limits<int>::max() / 2) throw StateSpaceTooLarge(joint);

  ScenarioMdp out;
  std::vector<std::vector<int>> coords;  // [state][uav] point index
  for (std::int64_t k = 0; k < joint; ++k) {
    std::vector<int> c(static_cast<std::size_t>(n));
    std::vector<Vec3> pos(static_cast<std::size_t>(n));
    std::int64_t rest = k;
    for (int i = n - 1; i >= 0; --i) {
      const auto m = static_cast<std::int64_t>(points[static_cast<std::size_t>(i)].size());
      c[static_cast<std::size_t>(i)] = static_cast<int>(rest % m);
      rest /= m;
      pos[static_cast<std::size_t>(i)] = s.position(i, points[static_cast<std::size_t>(i)][static_cast<std::size_t>(c[static_cast<std::size_t>(i)])]);
    }
    coords.push_back(std::move(c));
    out.states.push_back(std::move(pos));
  }

  struct Shared {
    Scenario scenario;
    std::vector<std::vector<LatticePoint>> points;
    std::vector<std::map<LatticePoint, int>> point_index;
    std::vector<std::vector<int>> coords;
    std::vector<std::vector<Vec3>> states;
    std::unique_ptr<LinkTable> links;
  };
  auto shared = std::make_shared<Shared>();
  shared->scenario = s;
  shared->points = points;
  shared->point_index = point_index;
  shared->coords = coords;
  shared->states = out.states;
  shared->links = std::make_unique<LinkTable>(shared->scenario, split);

  out.mdp.n_states = static_cast<int>(joint);
  out.mdp.n_actions = static_cast<int>(joint_actions);
  out.mdp.start_state = 0;
  out.mdp.discount = s.discount;
  out.mdp.actions = [shared, n](int state) {
    std::vector<int> result{0};
    for (int i = 0; i < n; ++i) {
      const auto per = available_actions(shared->states[static_cast<std::size_t>(state)][static_cast<std::size_t>(i)], shared->scenario).indices();
      std::vector<int> next;
      for (int base : result) {
        for (int a : per) next.push_back(base * kNumActions + a);
      }
      result = std::move(next);
    }
    std::sort(result.begin(), result.end());
    return result;
  };
  out.mdp.step = [shared, n](int state, int joint_action) {
    std::vector<int> acts(static_cast<std::size_t>(n));
    int rest = joint_action;
    for (int i = n - 1; i >= 0; --i) {
      acts[static_cast<std::size_t>(i)] = rest % kNumActions;
      rest /= kNumActions;
    }
    const auto& prev = shared->states[static_cast<std::size_t>(state)];
    std::vector<Vec3> next(static_cast<std::size_t>(n));
    std::int64_t next_state = 0;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const LatticePoint p = shared->points[ui][static_cast<std::size_t>(shared->coords[static_cast<std::size_t>(state)][ui])] +
                             action_from_index(acts[ui]).step;
      const auto it = shared->point_index[ui].find(p);
      if (it == shared->point_index[ui].end()) throw std::domain_error("action leaves the reachable lattice");
      next_state = next_state * static_cast<std::int64_t>(shared->points[ui].size()) + it->second;
      next[ui] = shared->scenario.position(i, p);
    }
    const CycleOutcome o = cycle_outcome(shared->scenario, prev, next, *shared->links);
    double reward = 0.0;
    for (const auto& u : o) reward += u.reward;
    return std::pair<int, double>{static_cast<int>(next_state), reward};
  };
  return out;
}

TabularResult tabular_q(const Scenario& s, const TabularConfig& config, int episodes, std::uint64_t seed) {
  const ScenarioMdp m = scenario_mdp(s);
  return tabular_q(m.mdp, config, episodes, seed);
}

}  // namespace u2d::rl
