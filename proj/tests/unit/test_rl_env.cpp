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

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "u2d/rl/environment.hpp"
#include "u2d/rl/policy.hpp"
#include "u2d/rl/tabular.hpp"
#include "u2d/rl/train.hpp"

using namespace u2d;
using namespace u2d::rl;
using u2d::testing::above;
using u2d::testing::small_scenario;

namespace {

// One UAV on a three-point line at fixed altitude.
Scenario line_scenario(double x0 = -350.0) {
  Scenario s = small_scenario({{{x0, 0.0, 100.0}, {-300.0, 0.0, 0.0}, {-200.0, 0.0, 0.0}}}, 1);
  s.h_min = 100.0;
  s.h_max = 100.0;
  s.region = Region{x0 - 25.0, x0 + 25.0, 0.0, 0.0};
  return s;
}

Scenario pair_scenario() {
  return small_scenario({above({-300, 0, 0}, {-250, 50, 0}), above({200, 200, 0}, {150, 150, 0})}, 1);
}

}  // namespace

TEST_CASE("state encoding") {
  const Scenario s = pair_scenario();
  const std::vector<Vec3> pos{{-250, 100, 75}, {500, -500, 150}};
  const Eigen::VectorXd own = encode_state(s, pos, 1, ObservationMode::kOwn);
  REQUIRE(own.size() == 3);
  CHECK(own(0) == doctest::Approx(1.0));
  CHECK(own(1) == doctest::Approx(-1.0));
  CHECK(own(2) == doctest::Approx(1.0));
  const Eigen::VectorXd full = encode_state(s, pos, 1, ObservationMode::kFull);
  REQUIRE(full.size() == 6);
  CHECK(full.head(3) == own);
  CHECK(full(3) == doctest::Approx(-0.5));
  CHECK(full(4) == doctest::Approx(0.2));
  CHECK(full(5) == doctest::Approx(0.5));
  CHECK(observation_size(s, ObservationMode::kFull) == 6);
  CHECK(observation_size(s, ObservationMode::kOwn) == 3);
}

TEST_CASE("environment steps") {
  const Scenario s = pair_scenario();
  Environment env(s);
  CHECK(env.positions()[0] == s.uavs[0].init_pos);
  const std::vector<int> stay{kStayAction, kStayAction};
  const StepResult r = env.step(stay);
  CHECK(env.positions()[0] == s.uavs[0].init_pos);
  REQUIRE(r.rewards.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(r.rewards[static_cast<std::size_t>(i)] == r.outcome[static_cast<std::size_t>(i)].reward);
    CHECK(r.rewards[static_cast<std::size_t>(i)] >= 0.0);
    CHECK(r.rewards[static_cast<std::size_t>(i)] <= 1.0);
  }
  // Climbing from 100 m is allowed, three more steps reach 175 m which is not.
  const int up = action_index({0, 0, 1});
  env.step({up, up});
  env.step({up, up});
  CHECK_FALSE(env.available(0).contains(up));
  CHECK_THROWS_AS(env.step({up, kStayAction}), std::domain_error);
  env.reset();
  CHECK(env.positions() == std::vector<Vec3>{s.uavs[0].init_pos, s.uavs[1].init_pos});
}

TEST_CASE("baseline policies") {
  const Scenario s = pair_scenario();
  Environment env(s);
  Rng rng(11);
  const EpisodeResult still = run_episode(env, baseline_policy(BaselineKind::kStationary), 6, 0.9, rng);
  for (const auto& path : still.trajectories) {
    REQUIRE(path.size() == 7);
    for (const Vec3& p : path) CHECK(p == path.front());
  }
  // Identical positions give identical rewards each cycle.
  for (const auto& rewards : still.rewards) {
    for (double r : rewards) CHECK(r == doctest::Approx(rewards.front()).epsilon(1e-12));
  }

  const EpisodeResult walk = run_episode(env, baseline_policy(BaselineKind::kRandomWalk), 40, 0.9, rng);
  double discounted = 0.0;
  double raw = 0.0;
  for (int i = 0; i < s.n_uavs(); ++i) {
    const auto& path = walk.trajectories[static_cast<std::size_t>(i)];
    for (std::size_t c = 1; c < path.size(); ++c) {
      CHECK(admissible(s, path[c]));
      CHECK(distance(path[c], path[c - 1]) <= std::sqrt(3.0) * s.delta + 1e-9);
    }
    for (std::size_t c = 0; c < walk.rewards[static_cast<std::size_t>(i)].size(); ++c) {
      discounted += std::pow(0.9, static_cast<double>(c)) * walk.rewards[static_cast<std::size_t>(i)][c];
      raw += walk.rewards[static_cast<std::size_t>(i)][c];
    }
  }
  CHECK(walk.utility_discounted == doctest::Approx(discounted));
  CHECK(walk.utility_raw == doctest::Approx(raw));
  CHECK(parse_baseline("random-walk") == BaselineKind::kRandomWalk);
  CHECK(parse_baseline("stationary") == BaselineKind::kStationary);
  CHECK_THROWS(parse_baseline("greedy"));
}

TEST_CASE("tabular learner on a bandit") {
  const std::vector<double> pay{0.1, 0.8, 0.3};
  FiniteMdp bandit;
  bandit.n_states = 1;
  bandit.n_actions = 3;
  bandit.discount = 0.0;
  bandit.actions = [](int) { return std::vector<int>{0, 1, 2}; };
  bandit.step = [&](int, int a) { return std::pair<int, double>{0, pay[static_cast<std::size_t>(a)]}; };
  const TabularResult q = tabular_q(bandit, {}, 100, 1);
  for (int a = 0; a < 3; ++a) CHECK(q.q[0][static_cast<std::size_t>(a)] == doctest::Approx(pay[static_cast<std::size_t>(a)]).epsilon(1e-6));
  CHECK(q.policy[0] == 1);
  const TabularResult vi = value_iteration(bandit);
  CHECK(vi.policy[0] == 1);
  CHECK(vi.q[0][1] == doctest::Approx(0.8));
}

TEST_CASE("tabular learner matches value iteration on a line") {
  const Scenario s = line_scenario();
  REQUIRE(check_scenario(s).size() > 0);
  for (const auto& c : check_scenario(s)) CHECK_MESSAGE(c.passed, c.name);
  const ScenarioMdp m = scenario_mdp(s);
  REQUIRE(m.mdp.n_states == 3);
  CHECK(m.state_of({s.uavs[0].init_pos}) == 0);
  for (int st = 0; st < 3; ++st) CHECK(m.mdp.actions(st).size() == 2 + (st == 0 ? 1u : 0u));
  const TabularResult vi = value_iteration(m.mdp);
  const TabularResult q = tabular_q(s, {}, 400, 20261016);
  CHECK(q.policy == vi.policy);
  for (int st = 0; st < 3; ++st) {
    for (int a : m.mdp.actions(st)) {
      CHECK(q.q[static_cast<std::size_t>(st)][static_cast<std::size_t>(a)] ==
            doctest::Approx(vi.q[static_cast<std::size_t>(st)][static_cast<std::size_t>(a)]).epsilon(1e-3));
    }
  }
}

TEST_CASE("tabular state space refusal") {
  const Scenario big = table3_scenario(20261016, 4);
  CHECK_THROWS_AS(scenario_mdp(big), StateSpaceTooLarge);
}

TEST_CASE("training is deterministic and respects masks") {
  const Scenario s = pair_scenario();
  AgentConfig cfg = AgentConfig::for_scenario(s);
  cfg.hidden = {8};
  cfg.cycles_per_episode = 6;
  cfg.batch_size = 4;
  cfg.eval_every = 1;
  TrainOptions opt;
  opt.episodes = 3;
  opt.seed = 42;
  const TrainResult a = train_keep_memory(s, cfg, opt);
  opt.workers = 2;
  const TrainResult b = train_keep_memory(s, cfg, opt);
  REQUIRE(a.metrics.size() == 3);
  REQUIRE(a.evaluations.size() == 3);
  CHECK(to_csv(metrics_table(a.metrics, 2)) == to_csv(metrics_table(b.metrics, 2)));
  CHECK(to_csv(evaluation_table(a.evaluations)) == to_csv(evaluation_table(b.evaluations)));
  for (std::size_t i = 0; i < a.policies.size(); ++i) CHECK(a.policies[i] == b.policies[i]);
  for (const EpisodeMetrics& m : a.metrics) {
    CHECK(m.utility_raw >= 0.0);
    CHECK(m.utility_raw <= 2.0 * cfg.cycles_per_episode);
    CHECK(m.utility_discounted <= m.utility_raw + 1e-12);
  }
  for (std::size_t i = 0; i < a.memories.size(); ++i) {
    REQUIRE(a.memories[i].size() == 18);
    for (int k = 0; k < a.memories[i].size(); ++k) {
      const Experience& e = a.memories[i].at(k);
      CHECK(e.available.contains(e.action));
      CHECK(e.reward >= 0.0);
      CHECK(e.reward <= 1.0);
    }
  }
  opt.seed = 43;
  const TrainResult c = train(s, cfg, opt);
  CHECK_FALSE(c.policies[0] == a.policies[0]);
}
