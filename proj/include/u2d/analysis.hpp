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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "u2d/channel.hpp"
#include "u2d/mode.hpp"
#include "u2d/scenario.hpp"

namespace u2d {

struct StpProfile {
  Vec3 device;
  Vec3 bs;
  double altitude = 100.0;
  std::vector<double> l2d;  // horizontal UAV-device distance, strictly increasing
  std::vector<double> stp_u2d;
  std::vector<double> stp_cell;

  int size() const { return static_cast<int>(l2d.size()); }
  // UAV position at horizontal distance l from the device toward the BS.
  Vec3 uav_at(double l) const;
};

// UAV flies from above the device straight toward the BS at a fixed altitude.
StpProfile stp_profile(const Vec3& device, const Vec3& bs, double altitude, int n_points,
                       const RadioModel& radio);

struct SwitchingPoint {
  std::optional<double> l2d;
  bool monotone = true;  // false when the profile columns are not monotone
};

// First U2D-to-cellular crossing, refined by bisection to 0.1 m. With no
// evaluator the difference is interpolated linearly between grid points.
SwitchingPoint switching_point(const StpProfile& profile,
                               const std::function<double(double)>& difference = nullptr);

SwitchingPoint switching_point(const StpProfile& profile, const RadioModel& radio);

bool profile_monotone(const StpProfile& profile, double slack = 1e-12);

double total_variation(const std::vector<double>& values);

enum class ModeLabel { kU2d, kCellular, kFail, kMixed };

std::string to_string(ModeLabel label);

ModeLabel label_for(const ModeProbabilities& m, double dominance = 0.5);

struct ModeMapCell {
  double x = 0.0;
  double y = 0.0;
  ModeProbabilities modes;
  ModeLabel label = ModeLabel::kMixed;
};

// Grid over the cell square at cell centres; resolution 1 gives the square's centre.
std::vector<ModeMapCell> mode_map(const Scenario& s, int uav, double altitude, int resolution,
                                  ModeSplit split = ModeSplit::kIndependent, double dominance = 0.5);

struct CollinearCell {
  double l_bd = 0.0;
  double l_bt = 0.0;
  ModeProbabilities modes;
  ModeLabel label = ModeLabel::kMixed;
};

// UAV hovers over its target; BS, device and target lie on the +x ray from the BS.
std::vector<CollinearCell> collinear_mode_sweep(const Scenario& s, double altitude, int resolution,
                                                ModeSplit split = ModeSplit::kIndependent,
                                                double dominance = 0.5);

// Ground distance from p to the closed triangle abc, or to the longest
// segment when the three points are collinear.
double distance_to_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

double triangle_containment(const std::vector<Vec3>& trajectory, const Vec3& bs, const Vec3& device,
                            const Vec3& target, double delta);

enum class TerminalBehavior { kStill, kOscillating, kWandering };

std::string to_string(TerminalBehavior b);

TerminalBehavior terminal_behavior(const std::vector<Vec3>& trajectory, int tail_length, double delta);

}  // namespace u2d
