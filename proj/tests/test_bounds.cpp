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


#include <cmath>
#include <numbers>
#include <random>

#include "bounds.hpp"
#include "doctest.h"

using namespace pushforge;

TEST_CASE("tent upper bound examples") {
  // sqrt(2) * floor(16 / 2)^-2
  CHECK(tent_upper_bound(20, 2, 1, 2) == doctest::Approx(std::sqrt(2.0) / 64.0));
  // sqrt(3) * floor(22 / 3)^-floor(3 / 2) = sqrt(3) / 7
  CHECK(tent_upper_bound(31, 3, 1, 3) == doctest::Approx(std::sqrt(3.0) / 7.0));
  CHECK(tent_upper_bound(10, 2, 2, 2) == 0.0);
  // Base 1: no decay, capped at the cube diameter.
  CHECK(tent_upper_bound(6, 2, 1, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(tent_upper_bound(4, 2, 1, 2), Error);
  // sqrt(2) * floor((1)(20 - 4 + 2) / 4)^-floor(2 / 2) = sqrt(2) / 4
  CHECK(tent_upper_bound_appendix(20, 2, 1, 2) == doctest::Approx(std::sqrt(2.0) / 4.0));
}

TEST_CASE("tent upper bound is nonincreasing in N") {
  for (int L = 1; L <= 4; ++L) {
    double prev = INFINITY;
    for (int N = 2 * L + 1; N <= 300; ++N) {
      const double b = tent_upper_bound(N, L, 1, 2);
      CHECK(b <= prev);
      prev = b;
    }
  }
}

TEST_CASE("affine piece bound") {
  CHECK(affine_piece_bound(10, 0, 1) == 1.0);
  const double e = std::numbers::e;
  CHECK(affine_piece_bound(20, 2, 1) == doctest::Approx(std::pow(10 * e + e, 2)));
  CHECK(affine_piece_bound(20, 2, 2) == doctest::Approx(std::pow(5 * e + e, 4)));
}

TEST_CASE("plane distance bound on a disk") {
  // Unit disk: bound = (1/2) Gamma(3/2)^2 pi / pi = pi / 8.
  const double b = plane_distance_bound(1, 2, 1.0, std::numbers::pi);
  CHECK(b == doctest::Approx(std::numbers::pi / 8.0));
  // Projecting onto any line through the centre costs E|dist| = 4 / (3 pi),
  // which must not beat the bound. Lines off centre only cost more.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::pair<double, double>> pts;
  while (pts.size() < 200000) {
    const double x = u(rng), y = u(rng);
    if (x * x + y * y <= 1.0) pts.push_back({x, y});
  }
  for (double angle : {0.0, 0.4, 1.3, 2.9}) {
    for (double offset : {0.0, 0.3}) {
      const double c = std::cos(angle), s = std::sin(angle);
      double sum = 0;
      for (const auto& [x, y] : pts) sum += std::abs(-s * x + c * y - offset);
      const double cost = sum / pts.size();
      CHECK(cost >= b);
      if (offset == 0.0) CHECK(cost == doctest::Approx(4.0 / (3.0 * std::numbers::pi)).epsilon(0.01));
    }
  }
}

TEST_CASE("plane distance bound scaling") {
  // Halving the mass per piece shrinks the bound by 2^(1/(d-n)).
  const double a = plane_distance_bound(1, 3, 0.8, 1.0);
  CHECK(dimension_gap_bound(1, 3, 0.8, 1.0, 4.0) == doctest::Approx(a / 2.0));
  CHECK(dimension_gap_bound(1, 3, 0.8, 1.0, 1.0) == doctest::Approx(a));
  // Large d stays finite.
  CHECK(std::isfinite(plane_distance_bound(50, 400, 10.0, 1.0)));
  CHECK_THROWS_AS(plane_distance_bound(2, 2, 1.0, 1.0), Error);
}

TEST_CASE("network lower bound sits below the tent upper bound") {
  for (int d : {2, 3, 4}) {
    for (int L : {1, 2, 3}) {
      for (int N = d * L + 1; N <= 400; N += 7) {
        CHECK(network_lower_bound(N, L, 1, d) <= tent_upper_bound(N, L, 1, d));
      }
    }
  }
  const double lb = network_lower_bound(20, 2, 1, 2);
  const double pieces = affine_piece_bound(20, 2, 1);
  CHECK(lb == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0) * pieces)));
}

TEST_CASE("bound report") {
  const BoundReport r = bound_report(unit_cube_params(20, 2, 1, 2));
  CHECK(r.status == "ok");
  CHECK(r.tent_upper == doctest::Approx(std::sqrt(2.0) / 64.0));
  CHECK(r.net_lower == doctest::Approx(network_lower_bound(20, 2, 1, 2)));
  CHECK(r.gap_lower == doctest::Approx(r.net_lower));
  const BoundReport s = bound_report(unit_cube_params(4, 2, 1, 2));
  CHECK(s.status == "skipped:N≤dL");
  CHECK(s.tent_upper == 0.0);
  CHECK(s.net_lower > 0.0);
  CHECK(bound_report(unit_cube_params(9, 2, 2, 2)).status == "n==d");
  BoundParams bad = unit_cube_params(20, 2, 1, 2);
  bad.N_A = 0.5;
  CHECK_THROWS_AS(bound_report(bad), Error);

  const std::string js = to_json(r);
  CHECK(js.find("\"tent_upper\"") != std::string::npos);
  const std::string row = to_csv_row(r);
  std::size_t header_commas = 0, row_commas = 0;
  for (char c : bound_csv_header()) header_commas += c == ',';
  for (char c : row) row_commas += c == ',';
  CHECK(header_commas == row_commas);
}

TEST_CASE("piecewise-linear fit to Phi") {
  const auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  for (int pieces : {1, 4, 16}) {
    const PwlFit fit = pwl_phi_fit(pieces, -2.0, 2.0);
    REQUIRE(fit.knots.size() == static_cast<std::size_t>(pieces) + 1);
    CHECK(fit.knots.front() == -2.0);
    CHECK(fit.knots.back() == 2.0);
    CHECK(fit.l1_error <= fit.grid_l1_error);
    // Independent midpoint quadrature of |Phi - fit|.
    const int n = 400000;
    const double h = 4.0 / n;
    double s = 0;
    std::size_t seg = 0;
    for (int i = 0; i < n; ++i) {
      const double x = -2.0 + (i + 0.5) * h;
      while (x > fit.knots[seg + 1]) ++seg;
      const double t = (x - fit.knots[seg]) / (fit.knots[seg + 1] - fit.knots[seg]);
      s += std::abs(Phi(x) - ((1 - t) * fit.values[seg] + t * fit.values[seg + 1]));
    }
    CHECK(fit.l1_error == doctest::Approx(s * h).epsilon(1e-5));
  }
  // The error falls like pieces^-2.
  const double e8 = pwl_phi_best_l1(8, -1.0, 1.0);
  const double e16 = pwl_phi_best_l1(16, -1.0, 1.0);
  const double e32 = pwl_phi_best_l1(32, -1.0, 1.0);
  CHECK(e16 < e8);
  CHECK(e32 < e16);
  CHECK(e8 / e16 == doctest::Approx(4.0).epsilon(0.25));
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.25));
  CHECK_THROWS_AS(pwl_phi_fit(0, -1.0, 1.0), Error);
}
