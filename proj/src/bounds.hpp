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


#ifndef PUSHFORGE_BOUNDS_HPP_
#define PUSHFORGE_BOUNDS_HPP_

#include <string>
#include <vector>

#include "errors.hpp"

namespace pushforge {

// sqrt(d) * floor((N - dL)/(nL))^-floor(L / ceil((d-n)/n)). Returns 0 when
// d == n (identity embedding). A base below 2 gives no decay, so the result
// is capped at sqrt(d), the diameter of the unit cube.
double tent_upper_bound(int N, int L, int n, int d);

// The looser closed form from the allocation argument:
// sqrt(d) * floor(((d-n)/n) (N - dL + d)/(dL))^-floor(nL/d).
double tent_upper_bound_appendix(int N, int L, int n, int d);

// (e N/(n0 L) + e)^(n0 L); 1 when L == 0.
double affine_piece_bound(int N, int L, int n0);

// Lower bound on W(U_B, any measure on an n-plane) for B of radius l and
// volume m_B in R^d.
double plane_distance_bound(int n, int d, double l, double m_B);

// plane_distance_bound with m_B replaced by m_B / N_A.
double dimension_gap_bound(int n, int d, double l, double m_B, double N_A);

// dimension_gap_bound on the unit cube: l = sqrt(d)/2, m_B = 1 and N_A from
// affine_piece_bound(N, L, n).
double network_lower_bound(int N, int L, int n, int d);

struct BoundParams {
  int N = 1, L = 1, n = 1, d = 1;
  double l = 0.5;
  double m_B = 1.0;
  double N_A = 1.0;  // 0 means "use affine_piece_bound(N, L, n)"

  void validate() const;
};

struct BoundReport {
  BoundParams params;
  double tent_upper = 0.0;
  double tent_upper_appendix = 0.0;
  double piece_bound = 0.0;
  double plane_lower = 0.0;
  double gap_lower = 0.0;
  double net_lower = 0.0;
  std::string status = "ok";  // or "skipped:N≤dL"
};

// Bounds that do not apply to the parameters (N <= dL, n == d) are reported
// as 0 with a status note rather than thrown.
BoundReport bound_report(const BoundParams& p);
BoundParams unit_cube_params(int N, int L, int n, int d);

std::string to_json(const BoundReport& r);
std::string bound_csv_header();
std::string to_csv_row(const BoundReport& r);

// Best L1 error on [a, b] of a continuous piecewise-linear function with
// `pieces` affine pieces to the standard normal CDF. Knots start from a
// dynamic program over a grid of max(401, 4*pieces + 1) points (chords
// between grid knots), then knot positions and values are refined by
// coordinate descent.
struct PwlFit {
  std::vector<double> knots, values;
  double l1_error = 0.0;
  double grid_l1_error = 0.0;  // before refinement
};
PwlFit pwl_phi_fit(int pieces, double a, double b);
double pwl_phi_best_l1(int pieces, double a, double b);

}  // namespace pushforge

#endif  // PUSHFORGE_BOUNDS_HPP_
