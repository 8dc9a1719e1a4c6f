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

#include "u2d/mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "u2d/quadrature.hpp"

namespace u2d {

namespace {

constexpr double kQuadratureTol = 1e-7;

// P{log2(1 + xi zeta) >= beta} for a LoS/NLoS air link.
struct AirTail {
  RatePdfContext link;

  double operator()(double beta) const {
    const double u = std::expm1(beta * std::numbers::ln2);
    const double k = link.fading.k_rice;
    double tail = 0.0;
    if (link.p_los > 0.0) {
      const double chi = u / link.xi_los;
      tail += link.p_los * (std::isinf(chi) ? 0.0
                                            : marcum_q1(std::sqrt(2.0 * k), chi * std::sqrt(2.0 * (k + 1.0))));
    }
    if (link.p_nlos > 0.0) {
      const double chi = u / link.xi_nlos;
      tail += link.p_nlos * std::exp(-0.5 * chi * chi);
    }
    return std::clamp(tail, 0.0, 1.0);
  }
};

// Psi(y) = P{R^c >= y} = P{uplink >= 2y} P{ground >= 2y}.
struct CellularTail {
  AirTail uplink;
  double xi_ground;

  double operator()(double y) const {
    const double chi = std::expm1(2.0 * y * std::numbers::ln2) / xi_ground;
    return uplink(2.0 * y) * std::exp(-0.5 * chi * chi);
  }
};

CellularTail make_cellular_tail(const Vec3& uav, const Vec3& device, const Vec3& bs,
                                const RadioModel& radio) {
  return {AirTail{RatePdfContext::for_link(uav, bs, radio)},
          snr_scale(radio.bs_power_dbm, radio.noise_dbm,
                    path_loss_ground(device, bs, radio.carrier_ghz))};
}

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(name) + " must be a probability in [0, 1]");
  }
}

}  // namespace

RatePdfContext RatePdfContext::for_link(const Vec3& uav, const Vec3& device, const RadioModel& radio) {
  RatePdfContext ctx;
  ctx.fading = radio.fading;
  ctx.p_los = los_probability(uav, device);
  ctx.p_nlos = 1.0 - ctx.p_los;
  ctx.xi_los = snr_scale(radio.uav_power_dbm, radio.noise_dbm, path_loss_air(uav, device, true, radio));
  ctx.xi_nlos =
      snr_scale(radio.uav_power_dbm, radio.noise_dbm, path_loss_air(uav, device, false, radio));
  return ctx;
}

double rate_pdf_u2d(double y, const RatePdfContext& ctx) {
  if (!(y > 0.0)) return 0.0;
  const double two_y = std::exp2(y);
  const double u = std::expm1(y * std::numbers::ln2);  // 2^y - 1
  const double ln2 = std::numbers::ln2;
  double density = 0.0;
  if (ctx.p_los > 0.0) {
    const double k = ctx.fading.k_rice;
    const double xi = ctx.xi_los;
    const double z = 2.0 * std::sqrt((k + 1.0) * k) * u / xi;
    // exp{-((K+1)u^2 + K xi^2)/xi^2} I0(z), with I0 scaled by e^{-z}.
    const double exponent = -((k + 1.0) * u * u + k * xi * xi) / (xi * xi) + z;
    const double f_los =
        2.0 * ln2 * (k + 1.0) * u * two_y / (xi * xi) * std::exp(exponent) * bessel_i0_scaled(z);
    density += ctx.p_los * f_los;
  }
  if (ctx.p_nlos > 0.0) {
    const double xi = ctx.xi_nlos;
    const double f_nlos = ln2 * u * two_y / (xi * xi) * std::exp(-u * u / (2.0 * xi * xi));
    density += ctx.p_nlos * f_nlos;
  }
  return density;
}

double rate_upper_limit(const Vec3& uav, const Vec3& device, const RadioModel& radio,
                        double tail_mass) {
  const AirTail tail{RatePdfContext::for_link(uav, device, radio)};
  double hi = 1.0;
  while (tail(hi) >= tail_mass) {
    hi *= 2.0;
    if (hi > 1e4) throw NumericalError("rate tail does not decay", tail(hi));
  }
  double lo = 0.0;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) >= tail_mass ? lo : hi) = mid;
  }
  return hi;
}

double prob_u2d_preferred(const Vec3& uav, const Vec3& device, const Vec3& bs,
                          const RadioModel& radio) {
  const RatePdfContext ctx = RatePdfContext::for_link(uav, device, radio);
  const CellularTail psi = make_cellular_tail(uav, device, bs, radio);
  const double y_max = rate_upper_limit(uav, device, radio);
  const QuadratureResult q = adaptive_simpson(
      [&](double y) { return psi(y) * rate_pdf_u2d(y, ctx); }, 0.0, y_max, kQuadratureTol);
  if (!q.converged || q.error_estimate > kQuadratureTol) {
    throw NumericalError("P{R^u >= R^c} quadrature did not converge", q.error_estimate);
  }
  return std::clamp(1.0 - q.value, 0.0, 1.0);
}

double joint_u2d_overlap(const Vec3& uav, const Vec3& device, const Vec3& bs,
                         const RadioModel& radio) {
  const RatePdfContext ctx = RatePdfContext::for_link(uav, device, radio);
  const CellularTail psi = make_cellular_tail(uav, device, bs, radio);
  const double r_th = radio.rate_threshold;
  const double y_max = rate_upper_limit(uav, device, radio);
  if (y_max <= r_th) return 0.0;
  const double psi_th = psi(r_th);
  const QuadratureResult q = adaptive_simpson(
      [&](double y) { return std::max(0.0, psi_th - psi(y)) * rate_pdf_u2d(y, ctx); }, r_th, y_max,
      kQuadratureTol);
  if (!q.converged || q.error_estimate > kQuadratureTol) {
    throw NumericalError("joint mode overlap quadrature did not converge", q.error_estimate);
  }
  return std::max(0.0, q.value);
}

ModeProbabilities mode_probabilities(double stp_u, double stp_c, double pref_u) {
  require_probability(stp_u, "stp_u");
  require_probability(stp_c, "stp_c");
  require_probability(pref_u, "pref_u");
  ModeProbabilities m;
  const double both = stp_u * stp_c;
  m.p_u2d = stp_u * (1.0 - stp_c) + both * pref_u;
  m.p_cell = (1.0 - stp_u) * stp_c + both * (1.0 - pref_u);
  m.p_fail = (1.0 - stp_u) * (1.0 - stp_c);
  return m;
}

ModeProbabilities mode_probabilities_joint(double stp_u, double stp_c, double overlap) {
  require_probability(stp_u, "stp_u");
  require_probability(stp_c, "stp_c");
  const double j = std::clamp(overlap, 0.0, stp_u * stp_c);
  ModeProbabilities m;
  m.p_u2d = stp_u * (1.0 - stp_c) + j;
  m.p_cell = stp_c - j;
  m.p_fail = (1.0 - stp_u) * (1.0 - stp_c);
  return m;
}

FrameLink evaluate_frame_link(const Vec3& uav, const Vec3& device, const Vec3& bs,
                              const RadioModel& radio, ModeSplit split) {
  FrameLink link;
  link.stp_u2d = stp_u2d(uav, device, radio);
  link.stp_cell = stp_cellular(uav, device, bs, radio);
  const bool contested = link.stp_u2d > 0.0 && link.stp_cell > 0.0;
  if (split == ModeSplit::kIndependent) {
    const double pref = contested ? prob_u2d_preferred(uav, device, bs, radio) : 1.0;
    link.modes = mode_probabilities(link.stp_u2d, link.stp_cell, pref);
  } else {
    const double overlap = contested ? joint_u2d_overlap(uav, device, bs, radio) : 0.0;
    link.modes = mode_probabilities_joint(link.stp_u2d, link.stp_cell, overlap);
  }
  return link;
}

}  // namespace u2d
