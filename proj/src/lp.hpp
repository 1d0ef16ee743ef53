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

#ifndef PUSHFORGE_LP_HPP_
#define PUSHFORGE_LP_HPP_

#include <vector>

namespace pushforge {

struct Halfspace {
  std::vector<double> a;  // a . x <= b
  double b = 0.0;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex with Bland's rule for
//   maximize c.x  subject to  A x <= b,  x >= 0.
// Intended for the tiny programs of region enumeration (a handful of
// variables, a few dozen rows).
LpResult simplex_maximize(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b);

struct ChebyshevBall {
  bool nonempty = false;
  double radius = 0.0;
  std::vector<double> center;
};

// Largest ball inside {x in [lo, hi] : a_i . x <= b_i}.
ChebyshevBall chebyshev_center(const std::vector<Halfspace>& constraints,
                               const std::vector<double>& lo,
                               const std::vector<double>& hi);

}  // namespace pushforge

#endif  // PUSHFORGE_LP_HPP_
