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

#include "u2d/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace u2d {

double binomial_sigma(double p, std::int64_t trials) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  const double n = static_cast<double>(trials);
  return std::max(std::sqrt(std::clamp(p, 0.0, 1.0) * (1.0 - std::clamp(p, 0.0, 1.0)) / n), 1.0 / n);
}

double binomial_z(double expected, double observed, std::int64_t trials) {
  return std::abs(observed - expected) / binomial_sigma(expected, trials);
}

namespace {

template <class Body>
void run_partitioned(std::int64_t trials, int workers, Body body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::int64_t>(trials, 64))));
  if (workers == 1) {
    body(0, 0, trials);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, w, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

CycleEventCounts estimate_cycle_events(const Scenario& s, std::span<const Vec3> prev_endpoints,
                                       std::span<const Vec3> endpoints, std::int64_t trials,
                                       std::uint64_t seed, ModeSplit split, int workers) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  LinkTable links(s, split);
  const CycleSimulator sim(s, plan_cycle(s, prev_endpoints, endpoints, links), split);
  const auto n = static_cast<std::size_t>(s.n_uavs());
  std::vector<CycleEventCounts> partial(static_cast<std::size_t>(std::max(1, workers)));
  run_partitioned(trials, workers, [&](int w, std::int64_t lo, std::int64_t hi) {
    CycleEventCounts c;
    c.sensed.assign(n, 0);
    c.u2d.assign(n, 0);
    c.cell.assign(n, 0);
    c.fail.assign(n, 0);
    for (std::int64_t k = lo; k < hi; ++k) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
      const auto events = sim.run(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (events[i].sensed) ++c.sensed[i];
        switch (events[i].outcome) {
          case Indicator::kU2d: ++c.u2d[i]; break;
          case Indicator::kCellular: ++c.cell[i]; break;
          case Indicator::kPending: ++c.fail[i]; break;
        }
      }
      ++c.trials;
    }
    partial[static_cast<std::size_t>(w)] = std::move(c);
  });
  CycleEventCounts total;
  total.sensed.assign(n, 0);
  total.u2d.assign(n, 0);
  total.cell.assign(n, 0);
  total.fail.assign(n, 0);
  for (const auto& c : partial) {
    if (c.trials == 0) continue;
    total.trials += c.trials;
    for (std::size_t i = 0; i < n; ++i) {
      total.sensed[i] += c.sensed[i];
      total.u2d[i] += c.u2d[i];
      total.cell[i] += c.cell[i];
      total.fail[i] += c.fail[i];
    }
  }
  return total;
}

LinkEventCounts estimate_link_events(const Vec3& uav, const Vec3& device, const Vec3& bs,
                                     const RadioModel& radio, std::int64_t trials,
                                     std::uint64_t seed, int workers) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  const LinkSampler sampler(uav, device, bs, radio);
  std::vector<LinkEventCounts> partial(static_cast<std::size_t>(std::max(1, workers)));
  run_partitioned(trials, workers, [&](int w, std::int64_t lo, std::int64_t hi) {
    LinkEventCounts c;
    for (std::int64_t k = lo; k < hi; ++k) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
      const Throughputs r = sampler.sample(rng);
      if (r.r_u2d >= radio.rate_threshold) ++c.u2d_ok;
      if (r.r_cell >= radio.rate_threshold) ++c.cell_ok;
      if (r.r_u2d >= r.r_cell) ++c.u2d_ge_cell;
      ++c.trials;
    }
    partial[static_cast<std::size_t>(w)] = c;
  });
  LinkEventCounts total;
  for (const auto& c : partial) {
    total.trials += c.trials;
    total.u2d_ok += c.u2d_ok;
    total.cell_ok += c.cell_ok;
    total.u2d_ge_cell += c.u2d_ge_cell;
  }
  return total;
}

std::vector<MarkovVerifyRow> markov_verify(const Scenario& s, std::span<const Vec3> prev_endpoints,
                                           std::span<const Vec3> endpoints, std::int64_t trials,
                                           std::uint64_t seed, ModeSplit split, int workers) {
  LinkTable links(s, split);
  const CycleOutcome exact = cycle_outcome(s, prev_endpoints, endpoints, links);
  const CycleEventCounts counts =
      estimate_cycle_events(s, prev_endpoints, endpoints, trials, seed, split, workers);
  std::vector<MarkovVerifyRow> rows;
  for (int i = 0; i < s.n_uavs(); ++i) {
    MarkovVerifyRow row;
    const auto& e = exact[static_cast<std::size_t>(i)];
    row.uav = i;
    row.exact = {e.p_u2d, e.p_cell, e.p_fail};
    row.mc = {counts.freq(counts.u2d, i), counts.freq(counts.cell, i), counts.freq(counts.fail, i)};
    row.trials = counts.trials;
    row.z_max = std::max({binomial_z(row.exact.p_u2d, row.mc.p_u2d, trials),
                          binomial_z(row.exact.p_cell, row.mc.p_cell, trials),
                          binomial_z(row.exact.p_fail, row.mc.p_fail, trials)});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace u2d
