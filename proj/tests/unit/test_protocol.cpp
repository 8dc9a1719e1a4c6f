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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "helpers.hpp"
#include "u2d/monte_carlo.hpp"
#include "u2d/protocol.hpp"

using namespace u2d;

namespace {

// Forward propagation of the joint indicator distribution, frame by frame.
std::vector<TransmissionOutcome> forward_oracle(const std::vector<std::vector<FrameLink>>& frames, int k) {
  const std::size_t n = frames.empty() ? 0 : frames[0].size();
  std::map<std::vector<int>, double> dist{{std::vector<int>(n, 0), 1.0}};
  for (const auto& frame : frames) {
    std::map<std::vector<int>, double> next;
    for (const auto& [state, p] : dist) {
      std::vector<std::size_t> pending;
      for (std::size_t i = 0; i < n; ++i) {
        if (state[i] == 0) pending.push_back(i);
      }
      std::stable_sort(pending.begin(), pending.end(), [&](std::size_t a, std::size_t b) {
        return frame[a].combined_stp() > frame[b].combined_stp();
      });
      if (pending.size() > static_cast<std::size_t>(k)) pending.resize(static_cast<std::size_t>(k));
      // Enumerate 3^|allocated| outcomes.
      const std::size_t m = pending.size();
      std::size_t combos = 1;
      for (std::size_t j = 0; j < m; ++j) combos *= 3;
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<int> s = state;
        double q = p;
        std::size_t code = c;
        for (std::size_t j = 0; j < m; ++j) {
          const int o = static_cast<int>(code % 3);
          code /= 3;
          const auto& md = frame[pending[j]].modes;
          q *= o == 0 ? md.p_fail : (o == 1 ? md.p_u2d : md.p_cell);
          s[pending[j]] = o;
        }
        next[s] += q;
      }
    }
    dist = std::move(next);
  }
  std::vector<TransmissionOutcome> out(n, TransmissionOutcome{0, 0, 0});
  for (const auto& [state, p] : dist) {
    for (std::size_t i = 0; i < n; ++i) {
      (state[i] == 0 ? out[i].p_fail : (state[i] == 1 ? out[i].p_u2d : out[i].p_cell)) += p;
    }
  }
  return out;
}

std::vector<std::vector<FrameLink>> random_frames(Rng& rng, int n, int frames) {
  std::vector<std::vector<FrameLink>> out(static_cast<std::size_t>(frames));
  for (auto& f : out) {
    for (int i = 0; i < n; ++i) {
      FrameLink l;
      l.stp_u2d = uniform01(rng);
      l.stp_cell = uniform01(rng);
      l.modes = mode_probabilities(l.stp_u2d, l.stp_cell, uniform01(rng));
      f.push_back(l);
    }
  }
  return out;
}

std::vector<Vec3> inits(const Scenario& s) {
  std::vector<Vec3> p;
  for (const auto& u : s.uavs) p.push_back(u.init_pos);
  return p;
}

}  // namespace

TEST_CASE("combined STP") {
  CHECK(combined_stp(0.5, 0.5) == 0.75);
  CHECK(combined_stp(1.0, 0.3) == 1.0);
  CHECK(combined_stp(0.9, 0.7) == doctest::Approx(0.97).epsilon(1e-15));
}

TEST_CASE("subchannel allocation") {
  const std::vector<double> stps{0.9, 0.5, 0.7};
  auto pending = TransmissionState::all_pending(3);
  CHECK(allocate_subchannels(stps, pending, 2).flags == std::vector<std::uint8_t>{1, 0, 1});
  TransmissionState st{{Indicator::kPending, Indicator::kU2d, Indicator::kPending}};
  CHECK(allocate_subchannels(stps, st, 2).flags == std::vector<std::uint8_t>{1, 0, 1});
  const std::vector<double> tie{0.7, 0.7};
  CHECK(allocate_subchannels(tie, TransmissionState::all_pending(2), 1).flags == std::vector<std::uint8_t>{1, 0});
  TransmissionState one{{Indicator::kCellular, Indicator::kPending, Indicator::kU2d}};
  CHECK(allocate_subchannels(stps, one, 2).flags == std::vector<std::uint8_t>{0, 1, 0});
}

TEST_CASE("allocation never exceeds K nor picks succeeded UAVs") {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 6);
    const int k = 1 + static_cast<int>(uniform01(rng) * n);
    std::vector<double> stps;
    TransmissionState st;
    for (int i = 0; i < n; ++i) {
      stps.push_back(std::round(uniform01(rng) * 4) / 4);
      st.indicators.push_back(static_cast<Indicator>(static_cast<int>(uniform01(rng) * 3)));
    }
    const auto a = allocate_subchannels(stps, st, k);
    CHECK(a.count() <= k);
    int pending = 0;
    for (int i = 0; i < n; ++i) {
      if (a.allocated(i)) CHECK(st.pending(i));
      pending += st.pending(i);
    }
    CHECK(a.count() == std::min(k, pending));
  }
}

TEST_CASE("transition kernel") {
  const std::vector<ModeProbabilities> modes{{0.3, 0.2, 0.5}, {0.1, 0.6, 0.3}};
  const auto st = TransmissionState::all_pending(2);
  const auto idle = transition_kernel(modes, AllocationVector{{0, 0}}, st);
  REQUIRE(idle.size() == 1);
  CHECK(idle[0].first == st);
  CHECK(idle[0].second == 1.0);

  const std::vector<ModeProbabilities> single{{0.3, 0.2, 0.5}};
  const auto one = transition_kernel(single, AllocationVector{{1}}, TransmissionState::all_pending(1));
  std::map<int, double> got;
  for (const auto& [s, p] : one) got[static_cast<int>(s.indicators[0])] += p;
  CHECK(got[1] == doctest::Approx(0.3));
  CHECK(got[2] == doctest::Approx(0.2));
  CHECK(got[0] == doctest::Approx(0.5));

  const auto both = transition_kernel(modes, AllocationVector{{1, 1}}, st);
  double total = 0.0;
  for (const auto& [s, p] : both) {
    total += p;
    const auto& a = modes[0];
    const auto& b = modes[1];
    auto pick = [](const ModeProbabilities& m, Indicator v) {
      return v == Indicator::kPending ? m.p_fail : (v == Indicator::kU2d ? m.p_u2d : m.p_cell);
    };
    CHECK(p == doctest::Approx(pick(a, s.indicators[0]) * pick(b, s.indicators[1])));
  }
  CHECK(std::abs(total - 1.0) < 1e-12);

  TransmissionState done{{Indicator::kU2d, Indicator::kCellular}};
  const auto stay = transition_kernel(modes, AllocationVector{{0, 0}}, done);
  CHECK(stay.size() == 1);
  CHECK(stay[0].first == done);
}

TEST_CASE("transmission part base cases") {
  CHECK(transmission_part_probabilities({}, 1).empty());
  Rng rng(1);
  const auto one = random_frames(rng, 1, 1);
  const auto r = transmission_part_probabilities(one, 1);
  CHECK(r[0].p_u2d == doctest::Approx(one[0][0].modes.p_u2d));
  CHECK(r[0].p_cell == doctest::Approx(one[0][0].modes.p_cell));

  Scenario s = testing::small_scenario({testing::above({100, 0, 0}, {0, 0, 0})}, 1);
  s.transmission_frames = 0;
  s.v_max = s.delta * std::sqrt(3.0) / (s.cycle_frames() * s.frame_duration);
  const auto p = inits(s);
  const auto o = cycle_outcome(s, p, p);
  CHECK(o[0].p_u2d == 0.0);
  CHECK(o[0].p_cell == 0.0);
  CHECK(o[0].p_fail == 1.0);
}

TEST_CASE("recursion agrees with forward propagation on random instances") {
  Rng rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 4);
    const int k = 1 + static_cast<int>(uniform01(rng) * n);
    const int tt = 1 + static_cast<int>(uniform01(rng) * 3);
    const auto frames = random_frames(rng, n, tt);
    const auto got = transmission_part_probabilities(frames, k);
    const auto want = forward_oracle(frames, k);
    for (int i = 0; i < n; ++i) {
      const auto& g = got[static_cast<std::size_t>(i)];
      const auto& w = want[static_cast<std::size_t>(i)];
      CHECK(std::abs(g.p_u2d - w.p_u2d) < 1e-12);
      CHECK(std::abs(g.p_cell - w.p_cell) < 1e-12);
      CHECK(std::abs(g.p_fail - w.p_fail) < 1e-12);
      CHECK(g.p_u2d + g.p_cell + g.p_fail == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(g.p_u2d >= 0.0);
      CHECK(g.p_cell >= 0.0);
    }
  }
}

TEST_CASE("more subchannels never hurt") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(uniform01(rng) * 3);
    const int tt = 1 + static_cast<int>(uniform01(rng) * 3);
    const auto frames = random_frames(rng, n, tt);
    std::vector<double> prev(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k <= n; ++k) {
      const auto r = transmission_part_probabilities(frames, k);
      for (int i = 0; i < n; ++i) {
        const double ok = r[static_cast<std::size_t>(i)].p_u2d + r[static_cast<std::size_t>(i)].p_cell;
        CHECK(ok >= prev[static_cast<std::size_t>(i)] - 1e-12);
        prev[static_cast<std::size_t>(i)] = ok;
      }
    }
  }
}

TEST_CASE("single stationary UAV collapses to a closed form") {
  Scenario s = testing::small_scenario({testing::above({200, 100, 0}, {150, 50, 0})}, 1);
  const auto p = inits(s);
  const auto o = cycle_outcome(s, p, p);
  const auto link = evaluate_frame_link(p[0], s.uavs[0].device_pos, s.bs_pos, RadioModel::from_scenario(s));
  const double pss = ssp_cycle(p[0], p[0], s.uavs[0].target_pos, SensingParams::from_scenario(s), s.cycle_frames());
  const double closed = pss * (1.0 - std::pow(link.modes.p_fail, s.transmission_frames));
  CHECK(o[0].reward == doctest::Approx(closed).epsilon(1e-12));
  CHECK(o[0].p_ss == doctest::Approx(pss));
  CHECK(o[0].reward == doctest::Approx(o[0].p_ss * (o[0].p_u2d + o[0].p_cell)));
}

TEST_CASE("reward factorises and stays in range") {
  Scenario s = testing::small_scenario({testing::above({-200, 0, 0}, {-200, 0, 0}), testing::above({300, 300, 0}, {-100, 0, 0})}, 1);
  s.uavs[0].target_pos = {-200, 0, 0};
  const auto p = inits(s);
  std::vector<Vec3> q = p;
  q[1] = q[1] + action_from_index(0).displacement(s.delta);
  const auto o = cycle_outcome(s, p, q);
  for (const auto& u : o) {
    CHECK(u.reward >= 0.0);
    CHECK(u.reward <= 1.0);
    CHECK(u.p_u2d + u.p_cell + u.p_fail == doctest::Approx(1.0).epsilon(1e-12));
  }
  std::vector<Vec3> far = p;
  far[0] = far[0] + Vec3{0, 0, 50};
  CHECK_THROWS_AS(cycle_outcome(s, p, far), std::domain_error);
}

TEST_CASE("dead links give zero reward") {
  Scenario s = testing::small_scenario({testing::above({100, 0, 0}, {100, 0, 0}), testing::above({-100, 0, 0}, {-100, 0, 0})}, 2);
  s.uav_power_dbm = -200;
  const auto p = inits(s);
  for (const auto& u : cycle_outcome(s, p, p)) CHECK(u.reward < 1e-12);
}

TEST_CASE("simulated cycles are reproducible and consistent") {
  const Scenario s = read_scenario_file(testing::source_path("data/fig4.scenario"));
  const auto p = inits(s);
  Rng a(17);
  Rng b(17);
  for (int k = 0; k < 50; ++k) {
    const auto x = simulate_cycle(s, p, p, a);
    const auto y = simulate_cycle(s, p, p, b);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(x[i].sensed == y[i].sensed);
      CHECK(x[i].outcome == y[i].outcome);
      CHECK(x[i].success_frame == y[i].success_frame);
      CHECK((x[i].outcome == Indicator::kPending) == (x[i].success_frame < 0));
    }
    // At most K successes per frame.
    std::vector<int> per_frame(static_cast<std::size_t>(s.transmission_frames), 0);
    for (const auto& e : x) {
      if (e.success_frame >= 0) ++per_frame[static_cast<std::size_t>(e.success_frame)];
    }
    for (int c : per_frame) CHECK(c <= s.n_subchannels);
  }
}

TEST_CASE("simulated cycles match the recursion") {
  const Scenario s = read_scenario_file(testing::source_path("data/fig4.scenario"));
  const auto p = inits(s);
  for (ModeSplit split : {ModeSplit::kIndependent, ModeSplit::kJoint}) {
    const auto rows = markov_verify(s, p, p, 20000, 123, split);
    for (const auto& r : rows) CHECK(r.z_max < 3.5);
  }
  const auto c = estimate_cycle_events(s, p, p, 20000, 5);
  const auto o = cycle_outcome(s, p, p);
  for (int i = 0; i < s.n_uavs(); ++i) {
    CHECK(binomial_z(o[static_cast<std::size_t>(i)].p_ss, c.freq(c.sensed, i), 20000) < 3.5);
  }
}

TEST_CASE("Monte Carlo counts do not depend on the worker count") {
  const Scenario s = read_scenario_file(testing::source_path("data/fig4.scenario"));
  const auto p = inits(s);
  const auto one = estimate_cycle_events(s, p, p, 3001, 8, ModeSplit::kIndependent, 1);
  const auto three = estimate_cycle_events(s, p, p, 3001, 8, ModeSplit::kIndependent, 3);
  CHECK(one.u2d == three.u2d);
  CHECK(one.cell == three.cell);
  CHECK(one.fail == three.fail);
  CHECK(one.sensed == three.sensed);
}

TEST_CASE("binomial sigma") {
  CHECK(binomial_sigma(0.5, 100) == doctest::Approx(0.05));
  CHECK(binomial_sigma(0.0, 100) == doctest::Approx(0.01));
  CHECK(binomial_z(0.5, 0.6, 100) == doctest::Approx(2.0));
  CHECK_THROWS(binomial_sigma(0.5, 0));
}

TEST_CASE("link table caches lattice positions") {
  const Scenario s = read_scenario_file(testing::source_path("data/fig4.scenario"));
  LinkTable t(s);
  const Vec3 p = s.uavs[0].init_pos;
  const auto a = t.at(0, p);
  CHECK(t.size() == 1);
  const auto b = t.at(0, p);
  CHECK(t.size() == 1);
  CHECK(a.modes.p_u2d == b.modes.p_u2d);
  t.at(0, p + Vec3{s.delta / 4, 0, 0});
  CHECK(t.size() == 2);
  t.at(0, p + Vec3{1.234, 0, 0});
  CHECK(t.size() == 2);
}
