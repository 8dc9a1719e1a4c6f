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

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "u2d/special.hpp"

using namespace u2d;

namespace {

// Q1(a, b) as the integral of the Rice density of unit scale beyond b.
double marcum_oracle(double a, double b) {
  auto f = [a](double x) {
    return x * std::exp(-0.5 * (x - a) * (x - a)) * std::exp(-a * x) * std::cyl_bessel_i(0.0, a * x);
  };
  const double hi = std::max(a, b) + 40.0;
  if (b >= hi) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, b, hi, 15, 1e-14);
}

double rice_pdf_oracle(double x, double a, double sigma) {
  const double s2 = sigma * sigma;
  return x / s2 * std::exp(-(x * x + a * a) / (2 * s2)) * std::cyl_bessel_i(0.0, x * a / s2);
}

}  // namespace

TEST_CASE("fading parameters keep unit power") {
  for (double kdb : {-10.0, 0.0, 3.0, 10.0, 20.0}) {
    const auto f = FadingParams::from_k_db(kdb);
    CHECK(f.omega() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.los_amplitude * f.los_amplitude / (2 * f.sigma * f.sigma) ==
          doctest::Approx(std::pow(10.0, kdb / 10)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(FadingParams::from_k_linear(-1.0), std::domain_error);
}

TEST_CASE("I0 against the standard library") {
  for (double x = 0.0; x <= 700.0; x += (x < 30 ? 0.37 : 7.3)) {
    const double ref = std::cyl_bessel_i(0.0, x);
    CHECK(bessel_i0(x) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(bessel_i0_scaled(x) == doctest::Approx(std::exp(-x) * ref).epsilon(1e-10));
  }
  CHECK(bessel_i0_scaled(20.0 - 1e-12) == doctest::Approx(bessel_i0_scaled(20.0 + 1e-12)).epsilon(1e-10));
  CHECK(std::isfinite(bessel_i0_scaled(1e6)));
}

TEST_CASE("Marcum Q1 closed cases") {
  CHECK(marcum_q1(3.0, 0.0) == 1.0);
  for (double b : {0.1, 1.0, 2.5, 6.0}) CHECK(marcum_q1(0.0, b) == doctest::Approx(std::exp(-b * b / 2)).epsilon(1e-13));
  CHECK_THROWS_AS(marcum_q1(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(marcum_q1(1.0, -1.0), std::domain_error);
}

TEST_CASE("Marcum Q1 matches the integral oracle on a 10x10 grid") {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double a = 0.9 * i;
      const double b = 0.05 + 1.0 * j;
      worst = std::max(worst, std::abs(marcum_q1(a, b) - marcum_oracle(a, b)));
    }
  }
  CHECK(worst < 1e-8);
  CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(marcum_oracle(1.0, 1.0)).epsilon(1e-10));
}

TEST_CASE("Marcum Q1 stays a probability for large arguments") {
  for (double a : {30.0, 80.0, 200.0}) {
    for (double b : {a - 5, a, a + 5}) {
      const double q = marcum_q1(a, b);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
    }
    CHECK(marcum_q1(a, a - 5) > marcum_q1(a, a + 5));
  }
}

TEST_CASE("Rayleigh CDF") {
  CHECK(rayleigh_cdf(0.0) == 0.0);
  CHECK(rayleigh_cdf(std::sqrt(2 * std::log(2.0))) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rayleigh_cdf(50.0) == 1.0);
  CHECK_THROWS_AS(rayleigh_cdf(-0.1), std::domain_error);
}

TEST_CASE("Rice CDF is a CDF and integrates its density") {
  for (double kdb : {0.0, 10.0, 15.0}) {
    const auto f = FadingParams::from_k_db(kdb);
    CHECK(rice_cdf(0.0, f) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rice_cdf(20.0, f) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (double x = 0.0; x <= 4.0; x += 0.1) {
      const double c = rice_cdf(x, f);
      CHECK(c >= prev - 1e-15);
      prev = c;
      const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double t) { return rice_pdf_oracle(t, f.los_amplitude, f.sigma); }, 0.0, x, 15, 1e-13);
      CHECK(c == doctest::Approx(integral).epsilon(1e-6));
      CHECK(rice_pdf(x, f) == doctest::Approx(rice_pdf_oracle(x, f.los_amplitude, f.sigma)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(rice_cdf(-1.0, FadingParams::from_k_db(10)), std::domain_error);
}
