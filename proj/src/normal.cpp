// Copyright 2026 The pushforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace pushforge {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf_ref(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile_ref(double p) {
  if (!(p > 0.0 && p < 1.0)) fail_input("normal quantile needs p in (0, 1)");
  if (p == 0.5) return 0.0;
  // Work in the lower tail where the CDF keeps full relative precision.
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;
  double lo = -40.0, hi = 0.0;
  double x = -std::sqrt(-2.0 * std::log(q));  // rough start
  for (int it = 0; it < 200; ++it) {
    const double f = normal_cdf_ref(x) - q;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = normal_pdf(x);
    double next = x - f / d;
    if (!(next > lo && next < hi) || d == 0.0) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return upper ? -x : x;
}

double normal_cdf_antiderivative(double x) {
  return x * normal_cdf_ref(x) + normal_pdf(x);
}

double normal_lower_tail_integral(double x) { return normal_cdf_antiderivative(x); }

double normal_upper_tail_integral(double x) {
  return normal_pdf(x) - x * normal_cdf_ref(-x);
}

namespace {

struct LineGap {
  double p, yp, slope;
  double operator()(double x) const { return normal_cdf_ref(x) - yp - slope * (x - p); }
  double integral(double lo, double hi) const {
    const double a = lo - p, b = hi - p;
    return normal_cdf_antiderivative(hi) - normal_cdf_antiderivative(lo) -
           yp * (hi - lo) - 0.5 * slope * (b - a) * (b + a);
  }
};

double bracket_root(const LineGap& g, double lo, double hi, double glo) {
  // g is monotone on [lo, hi]; Newton steps that leave the bracket fall back
  // to bisection.
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx > 0.0) == (glo > 0.0)) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
    const double d = normal_pdf(x) - g.slope;
    double next = d != 0.0 ? x - gx / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double integral_abs_cdf_minus_line(double p, double q, double y_p, double slope) {
  if (!(q > p)) return 0.0;
  const LineGap g{p, y_p, slope};
  std::vector<double> cuts{p};
  auto add_cut = [&](double x) {
    if (x > p && x < q) cuts.push_back(x);
  };
  add_cut(0.0);
  // g'(x) = phi(x) - slope vanishes at +-sqrt(-2 ln(slope sqrt(2 pi))).
  if (slope > 0.0 && slope * kSqrt2Pi < 1.0) {
    const double t = std::sqrt(-2.0 * std::log(slope * kSqrt2Pi));
    add_cut(-t);
    add_cut(t);
  }
  cuts.push_back(q);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double glo = g(lo), ghi = g(hi);
    if ((glo > 0.0) != (ghi > 0.0) && glo != 0.0 && ghi != 0.0) {
      const double r = bracket_root(g, lo, hi, glo);
      total += std::abs(g.integral(lo, r)) + std::abs(g.integral(r, hi));
    } else {
      total += std::abs(g.integral(lo, hi));
    }
  }
  return total;
}

}  // namespace pushforge
