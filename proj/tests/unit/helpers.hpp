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

#include <cmath>
#include <string>
#include <vector>

#include "u2d/scenario.hpp"

namespace u2d::testing {

// Default parameters with hand placed UAVs.
inline Scenario small_scenario(const std::vector<UavSpec>& uavs, int k) {
  Scenario s;
  s.uavs = uavs;
  s.n_subchannels = k;
  return s;
}

inline UavSpec above(const Vec3& device, const Vec3& target, double z = 100.0) {
  return {{device.x, device.y, z}, device, target};
}

inline std::string source_path(const std::string& rel) { return std::string(U2D_SOURCE_DIR) + "/" + rel; }

}  // namespace u2d::testing
