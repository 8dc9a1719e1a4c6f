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

#include <cstdint>
#include <span>
#include <vector>

#include "u2d/protocol.hpp"

namespace u2d {

// Standard error of a binomial frequency, floored at one count of resolution.
double binomial_sigma(double p, std::int64_t trials);

// |observed - expected| in units of binomial_sigma(expected, trials).
double binomial_z(double expected, double observed, std::int64_t trials);

struct CycleEventCounts {
  std::int64_t trials = 0;
  std::vector<std::int64_t> sensed;  // [uav]
  std::vector<std::int64_t> u2d;
  std::vector<std::int64_t> cell;
  std::vector<std::int64_t> fail;

  double freq(const std::vector<std::int64_t>& v, int uav) const {
    return static_cast<double>(v[static_cast<std::size_t>(uav)]) / static_cast<double>(trials);
  }
};

// Trial k draws from derive_seed(seed, k), so counts do not depend on workers.
CycleEventCounts estimate_cycle_events(const Scenario& s, std::span<const Vec3> prev_endpoints,
                                       std::span<const Vec3> endpoints, std::int64_t trials,
                                       std::uint64_t seed, ModeSplit split = ModeSplit::kIndependent,
                                       int workers = 1);

struct LinkEventCounts {
  std::int64_t trials = 0;
  std::int64_t u2d_ok = 0;     // R^u >= R_th
  std::int64_t cell_ok = 0;    // R^c >= R_th
  std::int64_t u2d_ge_cell = 0;  // R^u >= R^c
};

LinkEventCounts estimate_link_events(const Vec3& uav, const Vec3& device, const Vec3& bs,
                                     const RadioModel& radio, std::int64_t trials,
                                     std::uint64_t seed, int workers = 1);

struct MarkovVerifyRow {
  int uav = 0;
  TransmissionOutcome exact;
  TransmissionOutcome mc;
  std::int64_t trials = 0;
  double z_max = 0.0;
};

// Exact transmission-part probabilities against the sampled protocol.
std::vector<MarkovVerifyRow> markov_verify(const Scenario& s, std::span<const Vec3> prev_endpoints,
                                           std::span<const Vec3> endpoints, std::int64_t trials,
                                           std::uint64_t seed, ModeSplit split = ModeSplit::kIndependent,
                                           int workers = 1);

}  // namespace u2d
