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
#include <random>

#include "builders.hpp"
#include "doctest.h"

using namespace pushforge;

namespace {

double tent(std::uint64_t k, double x) {
  const double kx = static_cast<double>(k) * x, f = std::floor(kx);
  return static_cast<long long>(f) % 2 == 0 ? kx - f : 1.0 - kx + f;
}

}  // namespace

TEST_CASE("tent map examples") {
  const Network t3 = tent_map_net(3);
  CHECK(t3.eval1(1.0 / 6.0) == doctest::Approx(0.5));
  CHECK(t3.eval1(0.5) == doctest::Approx(0.5));
  CHECK(t3.eval1(1.0) == doctest::Approx(1.0));
  CHECK(tent_map_net(4).eval1(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tent_map_net(1).eval1(0.3) == doctest::Approx(0.3));
  for (int k = 1; k <= 9; ++k) {
    const Network t = tent_map_net(k);
    CHECK(t.hidden_unit_count() == static_cast<std::size_t>(k));
    for (int i = 0; i <= 200; ++i) {
      const double x = i / 200.0;
      CHECK(std::abs(t.eval1(x) - tent(k, x)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(tent_map_net(0), Error);
}

TEST_CASE("space filling plan for (N, L) = (20, 2)") {
  const SpaceFillingPlan p = plan_space_filling(1, 2, 20, 2);
  CHECK(p.chain_width == 4);
  CHECK(p.run_length == 2);
  CHECK(p.k == 16);
  const auto [net, plan] = space_filling_net(1, 2, 20, 2);
  CHECK(net.input_dim() == 1);
  CHECK(net.output_dim() == 2);
  CHECK(net.layer_count() == 3);
  CHECK(net.hidden_unit_count() <= 20);
  for (int i = 0; i <= 500; ++i) {
    const double x = i / 500.0;
    const auto y = net.eval(std::vector<double>{x});
    CHECK(std::abs(y[0] - x) <= 1e-12);
    CHECK(std::abs(y[1] - tent(16, x)) <= 1e-11);
  }
}

TEST_CASE("space filling with two inputs and more outputs") {
  const auto [net, plan] = space_filling_net(2, 5, 60, 4);
  REQUIRE(plan.outputs_per_input == std::vector<int>{3, 2});
  const std::uint64_t k = plan.k;
  CHECK(k >= 2);
  CHECK(net.hidden_unit_count() <= 60);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    const auto y = net.eval(std::vector<double>{a, b});
    CHECK(std::abs(y[0] - a) <= 1e-12);
    CHECK(std::abs(y[1] - tent(k, a)) <= 1e-9);
    CHECK(std::abs(y[2] - tent(k * k, a)) <= 1e-7);
    CHECK(std::abs(y[3] - b) <= 1e-12);
    CHECK(std::abs(y[4] - tent(k, b)) <= 1e-9);
  }
}

TEST_CASE("space filling rejects N <= dL") {
  try {
    space_filling_net(1, 2, 4, 2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInput);
    CHECK(std::string(e.what()).find("N > dL") != std::string::npos);
  }
}

TEST_CASE("space filling with n == d is the identity") {
  const auto [net, plan] = space_filling_net(3, 3, 10, 2);
  const std::vector<double> x{0.1, 0.5, 0.9};
  CHECK(net.eval(x) == x);
  CHECK(plan.k == 1);
}

TEST_CASE("space filling frequency grows with N") {
  std::uint64_t prev = 0;
  for (int N = 5; N <= 200; N += 3) {
    const std::uint64_t k = plan_space_filling(1, 2, N, 2).k;
    CHECK(k >= prev);
    prev = k;
  }
  CHECK(prev > 1000);
}

TEST_CASE("multiplier accuracy and size") {
  for (double M : {1.0, 3.0}) {
    for (double eps : {1e-2, 1e-4}) {
      const Network mul = multiplier_net(M, eps);
      CHECK(static_cast<double>(mul.node_count()) <=
            kMultiplierSizeConstant * (1.0 + std::log(1.0 / eps) + std::log(M)));
      double worst = 0.0;
      for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
          const double x = -M + 2 * M * i / 40.0, y = -M + 2 * M * j / 40.0;
          worst = std::max(worst, std::abs(mul.eval(std::vector<double>{x, y})[0] - x * y));
        }
      }
      CHECK(worst <= eps);
    }
  }
  CHECK_THROWS_AS(multiplier_net(1.0, 0.0), Error);
  CHECK_THROWS_AS(multiplier_net(-1.0, 0.1), Error);
}

TEST_CASE("error budget split") {
  const auto [inner, outer] = error_budget_split(0.1, 2.0);
  CHECK(inner == doctest::Approx(0.025));
  CHECK(outer == doctest::Approx(0.05));
}

TEST_CASE("power tower") {
  const double M = 2.0, eps = 1e-3;
  const Network pt = power_tower_net(4, M, eps);
  CHECK(pt.output_dim() == 5);
  for (int i = 0; i <= 100; ++i) {
    const double x = -M + 2 * M * i / 100.0;
    const auto y = pt.eval(std::vector<double>{x});
    for (int j = 0; j <= 4; ++j) CHECK(std::abs(y[j] - std::pow(x, j)) <= eps);
  }
}

TEST_CASE("clamp") {
  const Network c = clamp_net(-1.0, 2.0);
  CHECK(c.eval1(-5.0) == -1.0);
  CHECK(c.eval1(0.5) == 0.5);
  CHECK(c.eval1(7.0) == 2.0);
  CHECK(c.hidden_unit_count() == 2);
  CHECK_THROWS_AS(clamp_net(1.0, 1.0), Error);
}

TEST_CASE("polynomial net") {
  const std::vector<double> c{0.5, -1.0, 0.0, 2.0};
  const Network p = polynomial_net(c, 1e-4);
  for (int i = 0; i <= 100; ++i) {
    const double s = -1.0 + i / 50.0;
    CHECK(std::abs(p.eval1(s) - (0.5 - s + 2 * s * s * s)) <= 1e-4);
  }
}

TEST_CASE("sum of uniforms standardizes") {
  const int n = 12;
  const Network s = sum_of_uniforms_net(n);
  CHECK(s.layer_count() == 1);
  const std::vector<double> half(n, 0.5);
  CHECK(s.eval(half)[0] == doctest::Approx(0.0).epsilon(1e-14));
  std::vector<double> ones(n, 1.0);
  CHECK(s.eval(ones)[0] == doctest::Approx(6.0));  // (12 - 6) / 1
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  double m1 = 0, m2 = 0;
  const int count = 20000;
  std::vector<double> x(n);
  for (int i = 0; i < count; ++i) {
    for (double& v : x) v = u(rng);
    const double y = s.eval(x)[0];
    m1 += y;
    m2 += y * y;
  }
  m1 /= count;
  m2 /= count;
  CHECK(std::abs(m1) <= 0.03);
  CHECK(std::abs(m2 - 1.0) <= 0.05);
}

TEST_CASE("certificate details") {
  const Built phi = normal_cdf_net(0.01);
  CHECK(phi.cert.detail("nodes") == static_cast<double>(phi.net.node_count()));
  CHECK_THROWS_AS(phi.cert.detail("missing"), Error);
  CHECK(cert_to_json(phi.cert).find("\"series_order\"") != std::string::npos);
}
