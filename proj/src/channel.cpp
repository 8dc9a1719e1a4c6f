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

#include "u2d/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace u2d {

RadioModel RadioModel::from_scenario(const Scenario& s) {
  RadioModel r;
  r.coefficients = s.radio;
  r.fading = FadingParams::from_k_db(s.radio.rice_k_db);
  r.uav_power_dbm = s.uav_power_dbm;
  r.bs_power_dbm = s.bs_power_dbm;
  r.noise_dbm = s.noise_dbm;
  r.carrier_ghz = s.carrier_ghz;
  r.rate_threshold = s.rate_threshold;
  return r;
}

double los_probability(const Vec3& uav, const Vec3& ground) {
  const double h = uav.z;
  if (!(h > 0.0)) throw std::domain_error("LoS probability needs UAV altitude > 0");
  const double lg_h = std::log10(h);
  const double d_c = std::max(294.05 * lg_h - 432.94, 18.0);
  const double d_2d = horizontal_distance(uav, ground);
  if (d_2d <= d_c) return 1.0;
  const double p0 = 233.98 * lg_h - 0.95;
  const double ratio = d_c / d_2d;
  return ratio + (1.0 - ratio) * std::exp(-d_2d / p0);
}

double path_loss_air(const Vec3& uav, const Vec3& ground, bool los, const RadioModel& radio) {
  const double d = distance(uav, ground);
  if (!(d > 0.0)) throw std::domain_error("path loss needs distinct positions");
  const RadioCoefficients& c = radio.coefficients;
  const double lg_d = std::log10(d);
  const double loss_los =
      c.los_intercept + c.los_distance_slope * lg_d + c.los_frequency_slope * std::log10(radio.carrier_ghz);
  if (los) return loss_los;
  const double lg_h = std::log10(std::max(uav.z, 1e-3));
  const double loss_nlos =
      c.nlos_intercept + (c.nlos_distance_base - c.nlos_height_slope * lg_h) * lg_d +
      c.nlos_frequency_slope * std::log10(40.0 * std::numbers::pi * radio.carrier_ghz / 3.0);
  return std::max(loss_los, loss_nlos);
}

double path_loss_ground(const Vec3& device, const Vec3& bs, double carrier_ghz) {
  const double d = distance(device, bs);
  if (!(d > 0.0)) throw std::domain_error("ground path loss needs distance > 0");
  return 20.0 * std::log10(d) + 20.0 * std::log10(carrier_ghz) + 32.45;
}

double snr_scale(double power_dbm, double noise_dbm, double loss_db) {
  return std::pow(10.0, (power_dbm - noise_dbm - loss_db) / 10.0);
}

namespace {

// (2^beta - 1) / xi; the fading threshold a link must exceed.
double fading_threshold(double beta, double xi) { return std::expm1(beta * std::numbers::ln2) / xi; }

double rice_tail(double chi, const FadingParams& f) {
  if (std::isinf(chi)) return 0.0;
  return marcum_q1(std::sqrt(2.0 * f.k_rice), chi * std::sqrt(2.0 * (f.k_rice + 1.0)));
}

double rayleigh_tail(double chi) { return std::exp(-0.5 * chi * chi); }

}  // namespace

LinkStp stp_air(const Vec3& ground, const Vec3& uav, double beta, const RadioModel& radio) {
  LinkStp out;
  out.p_los = los_probability(uav, ground);
  out.p_nlos = 1.0 - out.p_los;
  out.loss_los = path_loss_air(uav, ground, true, radio);
  out.loss_nlos = path_loss_air(uav, ground, false, radio);
  const double chi_los =
      fading_threshold(beta, snr_scale(radio.uav_power_dbm, radio.noise_dbm, out.loss_los));
  const double chi_nlos =
      fading_threshold(beta, snr_scale(radio.uav_power_dbm, radio.noise_dbm, out.loss_nlos));
  out.stp = out.p_los * rice_tail(chi_los, radio.fading) +
            (out.p_nlos > 0.0 ? out.p_nlos * rayleigh_tail(chi_nlos) : 0.0);
  out.stp = std::clamp(out.stp, 0.0, 1.0);
  return out;
}

double stp_ground(const Vec3& device, const Vec3& bs, double beta, const RadioModel& radio) {
  const double loss = path_loss_ground(device, bs, radio.carrier_ghz);
  const double chi = fading_threshold(beta, snr_scale(radio.bs_power_dbm, radio.noise_dbm, loss));
  return rayleigh_tail(chi);
}

double stp_u2d(const Vec3& uav, const Vec3& device, const RadioModel& radio) {
  return stp_air(device, uav, radio.rate_threshold, radio).stp;
}

double stp_cellular(const Vec3& uav, const Vec3& device, const Vec3& bs, const RadioModel& radio) {
  const double beta = 2.0 * radio.rate_threshold;
  return stp_air(bs, uav, beta, radio).stp * stp_ground(device, bs, beta, radio);
}

LinkSampler::AirLink LinkSampler::make_air(const Vec3& ground, const Vec3& uav,
                                           const RadioModel& radio) {
  AirLink link;
  link.p_los = los_probability(uav, ground);
  link.xi_los = snr_scale(radio.uav_power_dbm, radio.noise_dbm, path_loss_air(uav, ground, true, radio));
  link.xi_nlos =
      snr_scale(radio.uav_power_dbm, radio.noise_dbm, path_loss_air(uav, ground, false, radio));
  return link;
}

LinkSampler::LinkSampler(const Vec3& uav, const Vec3& device, const Vec3& bs, const RadioModel& radio)
    : fading_(radio.fading),
      u2d_(make_air(device, uav, radio)),
      uplink_(make_air(bs, uav, radio)),
      xi_ground_(snr_scale(radio.bs_power_dbm, radio.noise_dbm,
                           path_loss_ground(device, bs, radio.carrier_ghz))) {}

double LinkSampler::draw_air(const AirLink& link, Rng& rng) const {
  const bool los = uniform01(rng) < link.p_los;
  double zeta;
  if (los) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = fading_.los_amplitude + fading_.sigma * normal(rng);
    const double im = fading_.sigma * normal(rng);
    zeta = std::hypot(re, im);
  } else {
    zeta = std::sqrt(-2.0 * std::log1p(-uniform01(rng)));
  }
  return std::log2(1.0 + (los ? link.xi_los : link.xi_nlos) * zeta);
}

Throughputs LinkSampler::sample(Rng& rng) const {
  Throughputs t;
  t.r_u2d = draw_air(u2d_, rng);
  const double r_uplink = draw_air(uplink_, rng);
  const double kappa = std::sqrt(-2.0 * std::log1p(-uniform01(rng)));
  const double r_ground = std::log2(1.0 + xi_ground_ * kappa);
  t.r_cell = 0.5 * std::min(r_uplink, r_ground);
  return t;
}

Throughputs sample_throughputs(const Vec3& uav, const Vec3& device, const Vec3& bs,
                               const RadioModel& radio, Rng& rng) {
  return LinkSampler(uav, device, bs, radio).sample(rng);
}

}  // namespace u2d
