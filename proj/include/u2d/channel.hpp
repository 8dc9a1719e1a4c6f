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

#include "u2d/rng.hpp"
#include "u2d/scenario.hpp"
#include "u2d/special.hpp"

namespace u2d {

/// Radio-layer parameters taken from a scenario.
struct RadioModel {
  RadioCoefficients coefficients;
  FadingParams fading = FadingParams::from_k_db(10.0);
  double uav_power_dbm = 10.0;
  double bs_power_dbm = 41.0;
  double noise_dbm = -85.0;
  double carrier_ghz = 2.0;
  double rate_threshold = 1.0;

  static RadioModel from_scenario(const Scenario& s);
};

/// Terms of the air-to-ground STP for one link.
struct LinkStp {
  double p_los = 1.0;
  double p_nlos = 0.0;
  double loss_los = 0.0;   // dB
  double loss_nlos = 0.0;  // dB
  double stp = 0.0;
};

/// LoS probability of the link between a UAV and a ground node. Throws
/// std::domain_error for altitude <= 0.
double los_probability(const Vec3& uav, const Vec3& ground);

/// Air-to-ground path loss in dB. Throws std::domain_error for coincident
/// positions.
double path_loss_air(const Vec3& uav, const Vec3& ground, bool los, const RadioModel& radio);

/// Free-space BS-to-device path loss 20 lg d + 20 lg f + 32.45 dB.
double path_loss_ground(const Vec3& device, const Vec3& bs, double carrier_ghz);

/// Linear SNR scale P / (N0 10^{L/10}) for transmit power `power_dbm`.
double snr_scale(double power_dbm, double noise_dbm, double loss_db);

/// Probability that log2(1 + SNR) on the air link meets `beta`.
LinkStp stp_air(const Vec3& ground, const Vec3& uav, double beta, const RadioModel& radio);

/// Same for the BS-to-device terrestrial link (Rayleigh fading).
double stp_ground(const Vec3& device, const Vec3& bs, double beta, const RadioModel& radio);

double stp_u2d(const Vec3& uav, const Vec3& device, const RadioModel& radio);

/// UAV -> BS at 2 R_th times BS -> device at 2 R_th.
double stp_cellular(const Vec3& uav, const Vec3& device, const Vec3& bs, const RadioModel& radio);

struct Throughputs {
  double r_u2d = 0.0;   // bit/s/Hz
  double r_cell = 0.0;  // bit/s/Hz, already halved
};

/// Draws the three links of one frame. Link order in the stream: U2D LoS
/// state and fading, UAV->BS LoS state and fading, BS->device fading.
class LinkSampler {
 public:
  LinkSampler(const Vec3& uav, const Vec3& device, const Vec3& bs, const RadioModel& radio);

  Throughputs sample(Rng& rng) const;

 private:
  struct AirLink {
    double p_los;
    double xi_los;
    double xi_nlos;
  };
  static AirLink make_air(const Vec3& ground, const Vec3& uav, const RadioModel& radio);
  double draw_air(const AirLink& link, Rng& rng) const;

  FadingParams fading_;
  AirLink u2d_;
  AirLink uplink_;
  double xi_ground_;
};

Throughputs sample_throughputs(const Vec3& uav, const Vec3& device, const Vec3& bs,
                               const RadioModel& radio, Rng& rng);

}  // namespace u2d
