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

#include "u2d/quadrature.hpp"

namespace u2d {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  bool converged = true;
  double error = 0.0;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) {
      error += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    if (depth >= max_depth) {
      converged = false;
      error += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int panels, int max_depth) {
  QuadratureResult out;
  if (!(b > a)) return out;
  Simpson s{f, max_depth};
  const double h = (b - a) / panels;
  const double panel_tol = abs_tol / panels;
  double x0 = a;
  double f0 = f(x0);
  for (int i = 0; i < panels; ++i) {
    const double x1 = (i + 1 == panels) ? b : a + (i + 1) * h;
    const double xm = 0.5 * (x0 + x1);
    const double fm = f(xm);
    const double f1 = f(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    out.value += s.recurse(x0, x1, f0, fm, f1, whole, panel_tol, 0);
    x0 = x1;
    f0 = f1;
  }
  out.error_estimate = s.error;
  out.converged = s.converged;
  return out;
}

}  // namespace u2d
