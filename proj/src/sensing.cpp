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

#include "u2d/sensing.hpp"

#include <cmath>
#include <stdexcept>

namespace u2d {

double ssp_frame(const Vec3& uav, const Vec3& target, const SensingParams& params) {
  return std::exp(-params.lambda * params.frame_duration * distance(uav, target));
}

double ssp_cycle(const Vec3& prev_end, const Vec3& end, const Vec3& target,
                 const SensingParams& params, int cycle_frames) {
  if (params.sensing_frames > cycle_frames) {
    throw std::domain_error("sensing part longer than the cycle");
  }
  // Accumulate the exponent; the product of exponentials is exp of the sum.
  double path = 0.0;
  for (int t = 1; t <= params.sensing_frames; ++t) {
    path += distance(interpolate_position(prev_end, end, t, cycle_frames), target);
  }
  return std::exp(-params.lambda * params.frame_duration * path);
}

}  // namespace u2d
