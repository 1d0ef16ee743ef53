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

#ifndef PUSHFORGE_NORMAL_HPP_
#define PUSHFORGE_NORMAL_HPP_

namespace pushforge {

inline constexpr double kSqrt2Pi = 2.50662827463100050242;

double normal_pdf(double x);
// Standard normal CDF via erfc, accurate to a few ulps in both tails.
double normal_cdf_ref(double x);
// Inverse of normal_cdf_ref by safeguarded Newton iteration.
double normal_quantile_ref(double p);

// Antiderivative of the CDF: x Phi(x) + phi(x).
double normal_cdf_antiderivative(double x);

// Integral over [p, q] of |Phi(x) - (y_p + slope (x - p))|. The difference
// has at most four monotone stretches (split at 0 and at the tangency
// points), so roots are bracketed and each stretch is integrated with the
// closed-form antiderivative. The line is anchored at p so that steep
// segments keep their precision.
double integral_abs_cdf_minus_line(double p, double q, double y_p, double slope);

// Integral of |c - Phi(x)| over [p, q] for a constant c.
inline double integral_abs_cdf_minus_const(double p, double q, double c) {
  return integral_abs_cdf_minus_line(p, q, c, 0.0);
}

// Integral of Phi over (-inf, x] and of 1 - Phi over [x, inf).
double normal_lower_tail_integral(double x);
double normal_upper_tail_integral(double x);

}  // namespace pushforge

#endif  // PUSHFORGE_NORMAL_HPP_
