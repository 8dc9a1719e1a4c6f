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

#include "u2d/scenario.hpp"

namespace u2d {

struct SensingParams {
  double lambda = 5e-4;        // 1/(s*m)
  double frame_duration = 2.0;  // s
  int sensing_frames = 2;

  static SensingParams from_scenario(const Scenario& s) {
    return {s.sensing_factor, s.frame_duration, s.sensing_frames};
  }
};

/// Per-frame successful sensing probability exp(-lambda t_f |uav - target|).
double ssp_frame(const Vec3& uav, const Vec3& target, const SensingParams& params);

/// Product of per-frame sensing probabilities over frames 1..T_s, with the
/// UAV moving uniformly from `prev_end` to `end` over `cycle_frames` frames.
double ssp_cycle(const Vec3& prev_end, const Vec3& end, const Vec3& target,
                 const SensingParams& params, int cycle_frames);

}  // namespace u2d
