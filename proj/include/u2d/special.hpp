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

namespace u2d {

/// Rice fading with unit total power: Omega = A^2 + 2 sigma^2 = 1 and
/// K = A^2 / (2 sigma^2).
struct FadingParams {
  double k_rice = 10.0;  // linear
  double los_amplitude = 0.0;  // A
  double sigma = 0.0;

  static FadingParams from_k_linear(double k);
  static FadingParams from_k_db(double k_db);

  double omega() const { return los_amplitude * los_amplitude + 2.0 * sigma * sigma; }
};

/// exp(-x) * I0(x) for x >= 0. Power series up to x = 20, asymptotic
/// expansion beyond.
double bessel_i0_scaled(double x);

/// Modified Bessel function of the first kind, order zero.
double bessel_i0(double x);

/// First-order Marcum Q function Q1(a, b), a, b >= 0.
///
/// Evaluated as the Poisson mixture of upper regularized incomplete gamma
/// functions (the noncentral chi-square tail):
///   Q1(a, b) = sum_n e^{-a^2/2} (a^2/2)^n / n! * Gamma(n + 1, b^2/2) / n!
/// All terms are nonnegative. Summation stops once n exceeds the Poisson mean
/// and the geometric bound on the remaining Poisson mass drops below 1e-15 of
/// the accumulated sum (or 1e-17 absolute), so the absolute truncation error
/// is below 1e-15. Throws std::domain_error on negative arguments.
double marcum_q1(double a, double b);

/// 1 - exp(-x^2 / 2); unit-scale Rayleigh CDF.
double rayleigh_cdf(double x);

/// 1 - Q1(sqrt(2K), x sqrt(2(K + 1))).
double rice_cdf(double x, const FadingParams& fading);

/// Rice amplitude density with the parameters of `fading`.
double rice_pdf(double x, const FadingParams& fading);

}  // namespace u2d
