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
#include <unordered_map>
#include <utility>
#include <vector>

#include "u2d/channel.hpp"
#include "u2d/mode.hpp"
#include "u2d/scenario.hpp"
#include "u2d/sensing.hpp"

namespace u2d {

/// Per-UAV transmission indicator within a cycle.
enum class Indicator : std::uint8_t {
  kPending = 0,   // failed so far
  kU2d = 1,       // succeeded over U2D, absorbing
  kCellular = 2,  // succeeded through the BS, absorbing
};

struct TransmissionState {
  std::vector<Indicator> indicators;

  static TransmissionState all_pending(int n) {
    return {std::vector<Indicator>(static_cast<std::size_t>(n), Indicator::kPending)};
  }
  int size() const { return static_cast<int>(indicators.size()); }
  bool pending(int i) const { return indicators[static_cast<std::size_t>(i)] == Indicator::kPending; }

  friend bool operator==(const TransmissionState&, const TransmissionState&) = default;
};

struct AllocationVector {
  std::vector<std::uint8_t> flags;

  bool allocated(int i) const { return flags[static_cast<std::size_t>(i)] != 0; }
  int count() const;

  friend bool operator==(const AllocationVector&, const AllocationVector&) = default;
};

/// End-of-transmission-part probabilities for one UAV.
struct TransmissionOutcome {
  double p_u2d = 0.0;
  double p_cell = 0.0;
  double p_fail = 1.0;
};

struct UavCycleOutcome {
  double p_ss = 0.0;
  double p_u2d = 0.0;
  double p_cell = 0.0;
  double p_fail = 1.0;
  double reward = 0.0;  // p_ss (p_u2d + p_cell)
};

using CycleOutcome = std::vector<UavCycleOutcome>;

/// 1 - (1 - stp_u)(1 - stp_c).
double combined_stp(double stp_u, double stp_c);

/// Flags the K largest STPs among pending UAVs; ties go to the lower index.
AllocationVector allocate_subchannels(std::span<const double> stps, const TransmissionState& state,
                                      int n_subchannels);

/// One-frame transition distribution. Only allocated pending UAVs branch;
/// zero-probability successors are omitted.
std::vector<std::pair<TransmissionState, double>> transition_kernel(
    std::span<const ModeProbabilities> frame_modes, const AllocationVector& alloc,
    const TransmissionState& state);

/// Absorbing probabilities of the inner chain. `frames[f][i]` is UAV i's link
/// at transmission frame f (frame T_s + 1 + f of the cycle).
std::vector<TransmissionOutcome> transmission_part_probabilities(
    const std::vector<std::vector<FrameLink>>& frames, int n_subchannels);

/// Same, evaluating links at `positions[f][i]` for frames T_s+1..T_c.
std::vector<TransmissionOutcome> transmission_part_probabilities(
    const Scenario& s, const std::vector<std::vector<Vec3>>& positions,
    ModeSplit split = ModeSplit::kIndependent);

/// Memoized FrameLink per (UAV, frame position). Positions on the UAV's
/// lattice refined by T_c are cached; anything else is computed directly.
/// Not thread-safe.
class LinkTable {
 public:
  LinkTable(const Scenario& s, ModeSplit split = ModeSplit::kIndependent);

  FrameLink at(int uav, const Vec3& pos);
  ModeSplit split() const { return split_; }
  std::size_t size() const { return cache_.size(); }

 private:
  struct Key {
    int uav;
    LatticePoint cell;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return LatticePointHash{}(k.cell) * 31u + static_cast<std::size_t>(k.uav);
    }
  };

  const Scenario& scenario_;
  RadioModel radio_;
  ModeSplit split_;
  std::unordered_map<Key, FrameLink, KeyHash> cache_;
};

/// All position-dependent quantities of one cycle.
struct CyclePlan {
  std::vector<std::vector<Vec3>> positions;       // [frame 0..T_c-1][uav]
  std::vector<double> p_ss;                       // [uav]
  std::vector<std::vector<FrameLink>> tx_links;   // [transmission frame][uav]
};

/// Throws std::domain_error if an endpoint is not one lattice move away.
void check_reachable(const Scenario& s, std::span<const Vec3> prev_endpoints,
                     std::span<const Vec3> endpoints);

CyclePlan plan_cycle(const Scenario& s, std::span<const Vec3> prev_endpoints,
                     std::span<const Vec3> endpoints, LinkTable& links);

CycleOutcome cycle_outcome(const Scenario& s, const CyclePlan& plan);

CycleOutcome cycle_outcome(const Scenario& s, std::span<const Vec3> prev_endpoints,
                           std::span<const Vec3> endpoints, LinkTable& links);

CycleOutcome cycle_outcome(const Scenario& s, std::span<const Vec3> prev_endpoints,
                           std::span<const Vec3> endpoints,
                           ModeSplit split = ModeSplit::kIndependent);

struct SampledEvents {
  bool sensed = false;
  Indicator outcome = Indicator::kPending;
  int success_frame = -1;  // transmission frame index of the success, -1 if none
};

/// Sampling machinery for repeated draws of one planned cycle.
class CycleSimulator {
 public:
  CycleSimulator(const Scenario& s, CyclePlan plan, ModeSplit split);

  std::vector<SampledEvents> run(Rng& rng) const;
  const CyclePlan& plan() const { return plan_; }

 private:
  const Scenario& scenario_;
  CyclePlan plan_;
  ModeSplit split_;
  std::vector<std::vector<LinkSampler>> samplers_;  // [transmission frame][uav]
  std::vector<std::vector<double>> ssp_frames_;     // [sensing frame][uav]
};

/// One sampled cycle. Allocation uses the analytic STPs; link outcomes are
/// drawn. With ModeSplit::kJoint a UAV whose two modes both meet R_th picks the
/// higher throughput of the same draw; with kIndependent the ordering comes
/// from a second, independent draw.
std::vector<SampledEvents> simulate_cycle(const Scenario& s, std::span<const Vec3> prev_endpoints,
                                          std::span<const Vec3> endpoints, Rng& rng,
                                          ModeSplit split = ModeSplit::kIndependent);

}  // namespace u2d
