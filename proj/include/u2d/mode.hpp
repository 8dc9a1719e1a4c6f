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

#include <stdexcept>
#include <string>

#include "u2d/channel.hpp"

namespace u2d {

/// Outcome distribution of one frame for a UAV holding a subchannel.
struct ModeProbabilities {
  double p_u2d = 0.0;
  double p_cell = 0.0;
  double p_fail = 1.0;
};

/// How a frame's success probability is split between the two modes when
/// both links meet the QoS threshold.
enum class ModeSplit {
  /// P^u P^c P{R^u >= R^c}: the ordering event is taken as independent of
  /// the two threshold events.
  kIndependent,
  /// P{R^c >= R_th, R^u >= R^c}: the ordering is evaluated on the same draw
  /// that passed the thresholds.
  kJoint,
};

/// Linear SNR scales and LoS mixture weights of the U2D link.
struct RatePdfContext {
  double xi_los = 1.0;
  double xi_nlos = 1.0;
  FadingParams fading;
  double p_los = 1.0;
  double p_nlos = 0.0;

  static RatePdfContext for_link(const Vec3& uav, const Vec3& device, const RadioModel& radio);
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}
  double achieved_tolerance() const { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

/// Density of the U2D throughput R^u = log2(1 + xi zeta) as a LoS/NLoS mixture.
double rate_pdf_u2d(double y, const RatePdfContext& ctx);

/// Smallest y (to 1e-6 relative) with P{R^u >= y} below `tail_mass`.
double rate_upper_limit(const Vec3& uav, const Vec3& device, const RadioModel& radio,
                        double tail_mass = 1e-9);

/// P{R^u >= R^c} = 1 - int Psi(y) f_{R^u}(y) dy with Psi(y) = P{R^c >= y}.
/// Throws NumericalError if the quadrature does not reach 1e-7.
double prob_u2d_preferred(const Vec3& uav, const Vec3& device, const Vec3& bs,
                          const RadioModel& radio);

/// P{R^c >= R_th, R^u >= R^c} = int_{R_th} f_{R^u}(y) (Psi(R_th) - Psi(y)) dy.
double joint_u2d_overlap(const Vec3& uav, const Vec3& device, const Vec3& bs,
                         const RadioModel& radio);

/// Frame outcome split with an independent ordering event.
ModeProbabilities mode_probabilities(double stp_u, double stp_c, double pref_u);

/// Frame outcome split from the joint overlap P{R^c >= R_th, R^u >= R^c}.
ModeProbabilities mode_probabilities_joint(double stp_u, double stp_c, double overlap);

/// Everything the protocol needs about one UAV at one frame position.
struct FrameLink {
  double stp_u2d = 0.0;
  double stp_cell = 0.0;
  ModeProbabilities modes;

  double combined_stp() const { return 1.0 - (1.0 - stp_u2d) * (1.0 - stp_cell); }
};

FrameLink evaluate_frame_link(const Vec3& uav, const Vec3& device, const Vec3& bs,
                              const RadioModel& radio, ModeSplit split = ModeSplit::kIndependent);

}  // namespace u2d
