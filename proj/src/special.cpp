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

#include "u2d/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace u2d {

FadingParams FadingParams::from_k_linear(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::domain_error("Rice K-factor must be >= 0");
  FadingParams f;
  f.k_rice = k;
  f.los_amplitude = std::sqrt(k / (k + 1.0));
  f.sigma = std::sqrt(1.0 / (2.0 * (k + 1.0)));
  return f;
}

FadingParams FadingParams::from_k_db(double k_db) {
  return from_k_linear(std::pow(10.0, k_db / 10.0));
}

double bessel_i0_scaled(double x) {
  x = std::abs(x);
  if (x <= 20.0) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double ratio = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (ratio >= 1.0) break;  // asymptotic series starts diverging
    term *= ratio;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_i0(double x) {
  x = std::abs(x);
  return bessel_i0_scaled(x) * std::exp(x);
}

double marcum_q1(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("marcum_q1 requires a, b >= 0");
  if (b == 0.0) return 1.0;
  const double x = 0.5 * b * b;
  if (a == 0.0) return std::exp(-x);
  const double lambda = 0.5 * a * a;
  if (!std::isfinite(x)) return 0.0;

  const bool recurrence_safe = lambda < 700.0 && x < 700.0;
  const double log_lambda = std::log(lambda);
  const double log_x = std::log(x);

  double weight = recurrence_safe ? std::exp(-lambda) : 0.0;  // Poisson(n; lambda)
  double gamma_term = recurrence_safe ? std::exp(-x) : 0.0;   // e^{-x} x^n / n!
  double upper = 0.0;                                         // Gamma(n+1, x) / n!
  double sum = 0.0;
  const int max_terms = static_cast<int>(lambda + 40.0 * std::sqrt(lambda + 1.0) + 200.0);
  for (int n = 0; n < max_terms; ++n) {
    if (recurrence_safe) {
      if (n > 0) {
        weight *= lambda / n;
        gamma_term *= x / n;
      }
    } else {
      const double lg = std::lgamma(n + 1.0);
      weight = std::exp(-lambda + n * log_lambda - lg);
      gamma_term = std::exp(-x + n * log_x - lg);
    }
    upper += gamma_term;
    if (upper > 1.0) upper = 1.0;
    sum += weight * upper;
    if (n + 1 > lambda) {
      const double r = lambda / (n + 1.0);
      const double tail = weight * r / (1.0 - r);
      if (tail <= 1e-15 * sum || tail < 1e-17) break;
    }
  }
  return std::min(1.0, std::max(0.0, sum));
}

double rayleigh_cdf(double x) {
  if (!(x >= 0.0)) throw std::domain_error("rayleigh_cdf requires x >= 0");
  return -std::expm1(-0.5 * x * x);
}

double rice_cdf(double x, const FadingParams& fading) {
  if (!(x >= 0.0)) throw std::domain_error("rice_cdf requires x >= 0");
  if (std::isinf(x)) return 1.0;
  const double k = fading.k_rice;
  return 1.0 - marcum_q1(std::sqrt(2.0 * k), x * std::sqrt(2.0 * (k + 1.0)));
}

double rice_pdf(double x, const FadingParams& fading) {
  if (x <= 0.0) return 0.0;
  const double s2 = fading.sigma * fading.sigma;
  const double a = fading.los_amplitude;
  const double z = x * a / s2;
  // I0(z) e^{-(x^2+A^2)/(2 s2)} = I0e(z) e^{-(x-A)^2/(2 s2)}
  return x / s2 * bessel_i0_scaled(z) * std::exp(-(x - a) * (x - a) / (2.0 * s2));
}

}  // namespace u2d
