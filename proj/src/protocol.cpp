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

#include "u2d/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace u2d {

int AllocationVector::count() const {
  return static_cast<int>(std::count_if(flags.begin(), flags.end(), [](auto f) { return f != 0; }));
}

double combined_stp(double stp_u, double stp_c) { return 1.0 - (1.0 - stp_u) * (1.0 - stp_c); }

AllocationVector allocate_subchannels(std::span<const double> stps, const TransmissionState& state,
                                      int n_subchannels) {
  const int n = state.size();
  if (static_cast<int>(stps.size()) != n) {
    throw std::invalid_argument("allocate_subchannels: stps and state sizes differ");
  }
  std::vector<int> pending;
  for (int i = 0; i < n; ++i) {
    if (state.pending(i)) pending.push_back(i);
  }
  // stable_sort keeps lower indices first among equal STPs.
  std::stable_sort(pending.begin(), pending.end(),
                   [&](int a, int b) { return stps[static_cast<std::size_t>(a)] > stps[static_cast<std::size_t>(b)]; });
  AllocationVector alloc{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
  const int granted = std::min<int>(std::max(n_subchannels, 0), static_cast<int>(pending.size()));
  for (int r = 0; r < granted; ++r) alloc.flags[static_cast<std::size_t>(pending[static_cast<std::size_t>(r)])] = 1;
  return alloc;
}

std::vector<std::pair<TransmissionState, double>> transition_kernel(
    std::span<const ModeProbabilities> frame_modes, const AllocationVector& alloc,
    const TransmissionState& state) {
  std::vector<std::pair<TransmissionState, double>> out{{state, 1.0}};
  for (int i = 0; i < state.size(); ++i) {
    if (!state.pending(i) || !alloc.allocated(i)) continue;
    const ModeProbabilities& m = frame_modes[static_cast<std::size_t>(i)];
    const std::pair<Indicator, double> branches[] = {
        {Indicator::kPending, m.p_fail}, {Indicator::kU2d, m.p_u2d}, {Indicator::kCellular, m.p_cell}};
    std::vector<std::pair<TransmissionState, double>> next;
    next.reserve(out.size() * 3);
    for (const auto& [partial, weight] : out) {
      for (const auto& [value, p] : branches) {
        if (p <= 0.0) continue;
        TransmissionState s = partial;
        s.indicators[static_cast<std::size_t>(i)] = value;
        next.emplace_back(std::move(s), weight * p);
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

struct InnerChain {
  const std::vector<std::vector<FrameLink>>& frames;
  int n_subchannels;
  int n;

  // Per-UAV probabilities of succeeding (U2D, cellular) at or after frame f,
  // given state I at frame f.
  std::vector<std::array<double, 2>> after(int f, const TransmissionState& state) const {
    std::vector<std::array<double, 2>> result(static_cast<std::size_t>(n), {0.0, 0.0});
    if (f >= static_cast<int>(frames.size())) return result;
    const std::vector<FrameLink>& links = frames[static_cast<std::size_t>(f)];

    std::vector<double> stps(static_cast<std::size_t>(n));
    std::vector<ModeProbabilities> modes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      stps[static_cast<std::size_t>(i)] = links[static_cast<std::size_t>(i)].combined_stp();
      modes[static_cast<std::size_t>(i)] = links[static_cast<std::size_t>(i)].modes;
    }
    const AllocationVector alloc = allocate_subchannels(stps, state, n_subchannels);
    for (int i = 0; i < n; ++i) {
      if (state.pending(i) && alloc.allocated(i)) {
        result[static_cast<std::size_t>(i)] = {modes[static_cast<std::size_t>(i)].p_u2d,
                                               modes[static_cast<std::size_t>(i)].p_cell};
      }
    }
    if (f + 1 >= static_cast<int>(frames.size())) return result;

    for (const auto& [next, prob] : transition_kernel(modes, alloc, state)) {
      const auto later = after(f + 1, next);
      for (int i = 0; i < n; ++i) {
        if (!next.pending(i)) continue;
        result[static_cast<std::size_t>(i)][0] += prob * later[static_cast<std::size_t>(i)][0];
        result[static_cast<std::size_t>(i)][1] += prob * later[static_cast<std::size_t>(i)][1];
      }
    }
    return result;
  }
};

}  // namespace

std::vector<TransmissionOutcome> transmission_part_probabilities(
    const std::vector<std::vector<FrameLink>>& frames, int n_subchannels) {
  int n = 0;
  if (!frames.empty()) n = static_cast<int>(frames.front().size());
  for (const auto& f : frames) {
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("ragged frame links");
  }
  std::vector<TransmissionOutcome> out(static_cast<std::size_t>(n));
  if (frames.empty()) return out;
  const InnerChain chain{frames, n_subchannels, n};
  const auto probs = chain.after(0, TransmissionState::all_pending(n));
  for (int i = 0; i < n; ++i) {
    auto& o = out[static_cast<std::size_t>(i)];
    o.p_u2d = probs[static_cast<std::size_t>(i)][0];
    o.p_cell = probs[static_cast<std::size_t>(i)][1];
    o.p_fail = std::max(0.0, 1.0 - o.p_u2d - o.p_cell);
  }
  return out;
}

std::vector<TransmissionOutcome> transmission_part_probabilities(
    const Scenario& s, const std::vector<std::vector<Vec3>>& positions, ModeSplit split) {
  LinkTable table(s, split);
  std::vector<std::vector<FrameLink>> frames;
  for (const auto& frame : positions) {
    if (static_cast<int>(frame.size()) != s.n_uavs()) {
      throw std::invalid_argument("positions must list every UAV for every frame");
    }
    std::vector<FrameLink> links;
    for (int i = 0; i < s.n_uavs(); ++i) links.push_back(table.at(i, frame[static_cast<std::size_t>(i)]));
    frames.push_back(std::move(links));
  }
  return transmission_part_probabilities(frames, s.n_subchannels);
}

LinkTable::LinkTable(const Scenario& s, ModeSplit split)
    : scenario_(s), radio_(RadioModel::from_scenario(s)), split_(split) {}

FrameLink LinkTable::at(int uav, const Vec3& pos) {
  const UavSpec& spec = scenario_.uavs.at(static_cast<std::size_t>(uav));
  const double unit = scenario_.delta / scenario_.cycle_frames();
  const Vec3 rel = pos - spec.init_pos;
  const LatticePoint cell{static_cast<int>(std::lround(rel.x / unit)),
                          static_cast<int>(std::lround(rel.y / unit)),
                          static_cast<int>(std::lround(rel.z / unit))};
  const Vec3 snapped{unit * cell.x, unit * cell.y, unit * cell.z};
  const bool on_grid = distance(rel, snapped) <= 1e-6 * std::max(1.0, unit);
  auto compute = [&] {
    return evaluate_frame_link(pos, spec.device_pos, scenario_.bs_pos, radio_, split_);
  };
  if (!on_grid) return compute();
  const Key key{uav, cell};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  return cache_.emplace(key, compute()).first->second;
}

void check_reachable(const Scenario& s, std::span<const Vec3> prev_endpoints,
                     std::span<const Vec3> endpoints) {
  if (static_cast<int>(prev_endpoints.size()) != s.n_uavs() ||
      static_cast<int>(endpoints.size()) != s.n_uavs()) {
    throw std::invalid_argument("endpoint lists must have one entry per UAV");
  }
  const double tol = 1e-6 * std::max(1.0, s.delta);
  for (int i = 0; i < s.n_uavs(); ++i) {
    const Vec3& a = prev_endpoints[static_cast<std::size_t>(i)];
    const Vec3& b = endpoints[static_cast<std::size_t>(i)];
    const std::string who = "UAV " + std::to_string(i);
    if (!admissible(s, a)) throw std::domain_error(who + ": previous endpoint not admissible");
    if (!admissible(s, b)) throw std::domain_error(who + ": endpoint not admissible");
    const Vec3 d = b - a;
    for (double c : {d.x, d.y, d.z}) {
      const double steps = c / s.delta;
      if (std::abs(steps - std::round(steps)) * s.delta > tol || std::abs(std::round(steps)) > 1.0) {
        throw std::domain_error(who + ": endpoint is not one lattice move from the previous one");
      }
    }
  }
}

CyclePlan plan_cycle(const Scenario& s, std::span<const Vec3> prev_endpoints,
                     std::span<const Vec3> endpoints, LinkTable& links) {
  check_reachable(s, prev_endpoints, endpoints);
  const int n = s.n_uavs();
  const int t_c = s.cycle_frames();
  const SensingParams sensing = SensingParams::from_scenario(s);
  CyclePlan plan;
  plan.positions.assign(static_cast<std::size_t>(t_c), std::vector<Vec3>(static_cast<std::size_t>(n)));
  for (int t = 1; t <= t_c; ++t) {
    for (int i = 0; i < n; ++i) {
      plan.positions[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)] = interpolate_position(
          prev_endpoints[static_cast<std::size_t>(i)], endpoints[static_cast<std::size_t>(i)], t, t_c);
    }
  }
  plan.p_ss.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    plan.p_ss[static_cast<std::size_t>(i)] =
        ssp_cycle(prev_endpoints[static_cast<std::size_t>(i)], endpoints[static_cast<std::size_t>(i)],
                  s.uavs[static_cast<std::size_t>(i)].target_pos, sensing, t_c);
  }
  for (int t = s.sensing_frames + 1; t <= t_c; ++t) {
    std::vector<FrameLink> frame;
    for (int i = 0; i < n; ++i) {
      frame.push_back(links.at(i, plan.positions[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)]));
    }
    plan.tx_links.push_back(std::move(frame));
  }
  return plan;
}

CycleOutcome cycle_outcome(const Scenario& s, const CyclePlan& plan) {
  auto tx = transmission_part_probabilities(plan.tx_links, s.n_subchannels);
  // An empty transmission part leaves every UAV failed.
  tx.resize(static_cast<std::size_t>(s.n_uavs()));
  CycleOutcome out(static_cast<std::size_t>(s.n_uavs()));
  for (int i = 0; i < s.n_uavs(); ++i) {
    auto& o = out[static_cast<std::size_t>(i)];
    const auto& t = tx[static_cast<std::size_t>(i)];
    o.p_ss = plan.p_ss[static_cast<std::size_t>(i)];
    o.p_u2d = t.p_u2d;
    o.p_cell = t.p_cell;
    o.p_fail = t.p_fail;
    o.reward = o.p_ss * o.p_u2d + o.p_ss * o.p_cell;
  }
  return out;
}

CycleOutcome cycle_outcome(const Scenario& s, std::span<const Vec3> prev_endpoints,
                           std::span<const Vec3> endpoints, LinkTable& links) {
  return cycle_outcome(s, plan_cycle(s, prev_endpoints, endpoints, links));
}

CycleOutcome cycle_outcome(const Scenario& s, std::span<const Vec3> prev_endpoints,
                           std::span<const Vec3> endpoints, ModeSplit split) {
  LinkTable links(s, split);
  return cycle_outcome(s, prev_endpoints, endpoints, links);
}

CycleSimulator::CycleSimulator(const Scenario& s, CyclePlan plan, ModeSplit split)
    : scenario_(s), plan_(std::move(plan)), split_(split) {
  const RadioModel radio = RadioModel::from_scenario(s);
  const SensingParams sensing = SensingParams::from_scenario(s);
  const int n = s.n_uavs();
  for (int t = 1; t <= s.sensing_frames; ++t) {
    std::vector<double> row;
    for (int i = 0; i < n; ++i) {
      row.push_back(ssp_frame(plan_.positions[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)],
                              s.uavs[static_cast<std::size_t>(i)].target_pos, sensing));
    }
    ssp_frames_.push_back(std::move(row));
  }
  for (int t = s.sensing_frames + 1; t <= s.cycle_frames(); ++t) {
    std::vector<LinkSampler> row;
    for (int i = 0; i < n; ++i) {
      row.emplace_back(plan_.positions[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)],
                       s.uavs[static_cast<std::size_t>(i)].device_pos, s.bs_pos, radio);
    }
    samplers_.push_back(std::move(row));
  }
}

std::vector<SampledEvents> CycleSimulator::run(Rng& rng) const {
  const int n = scenario_.n_uavs();
  std::vector<SampledEvents> events(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) events[static_cast<std::size_t>(i)].sensed = true;
  for (const auto& frame : ssp_frames_) {
    for (int i = 0; i < n; ++i) {
      if (uniform01(rng) >= frame[static_cast<std::size_t>(i)]) events[static_cast<std::size_t>(i)].sensed = false;
    }
  }

  const double r_th = scenario_.rate_threshold;
  TransmissionState state = TransmissionState::all_pending(n);
  std::vector<double> stps(static_cast<std::size_t>(n));
  for (std::size_t f = 0; f < samplers_.size(); ++f) {
    for (int i = 0; i < n; ++i) stps[static_cast<std::size_t>(i)] = plan_.tx_links[f][static_cast<std::size_t>(i)].combined_stp();
    const AllocationVector alloc = allocate_subchannels(stps, state, scenario_.n_subchannels);
    for (int i = 0; i < n; ++i) {
      if (!state.pending(i) || !alloc.allocated(i)) continue;
      const Throughputs draw = samplers_[f][static_cast<std::size_t>(i)].sample(rng);
      const bool u2d_ok = draw.r_u2d >= r_th;
      const bool cell_ok = draw.r_cell >= r_th;
      Indicator result = Indicator::kPending;
      if (u2d_ok && cell_ok) {
        const Throughputs order =
            split_ == ModeSplit::kJoint ? draw : samplers_[f][static_cast<std::size_t>(i)].sample(rng);
        result = order.r_u2d >= order.r_cell ? Indicator::kU2d : Indicator::kCellular;
      } else if (u2d_ok) {
        result = Indicator::kU2d;
      } else if (cell_ok) {
        result = Indicator::kCellular;
      }
      if (result != Indicator::kPending) {
        state.indicators[static_cast<std::size_t>(i)] = result;
        events[static_cast<std::size_t>(i)].outcome = result;
        events[static_cast<std::size_t>(i)].success_frame = static_cast<int>(f);
      }
    }
  }
  return events;
}

std::vector<SampledEvents> simulate_cycle(const Scenario& s, std::span<const Vec3> prev_endpoints,
                                          std::span<const Vec3> endpoints, Rng& rng, ModeSplit split) {
  LinkTable links(s, split);
  CycleSimulator sim(s, plan_cycle(s, prev_endpoints, endpoints, links), split);
  return sim.run(rng);
}

}  // namespace u2d
