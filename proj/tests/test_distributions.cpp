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

#include "builders.hpp"
#include "doctest.h"
#include "transport.hpp"

using namespace pushforge;

namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Quantile by plain bisection on std::erfc; independent of the library.
double quantile(double p) {
  double lo = -40, hi = 40;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Phi(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool near_stage_point(double x, double a, double b, int t, double r) {
  for (int s = 1; s <= t; ++s) {
    const double step = (b - a) * std::ldexp(1.0, -s);
    const double j = std::round((x - a) / step);
    if (std::abs(a + j * step - x) <= r) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("normal cdf net within eps") {
  for (double eps : {0.1, 1e-2, 1e-3}) {
    const Built phi = normal_cdf_net(eps);
    double worst = 0;
    for (int i = 0; i <= 2400; ++i) {
      const double x = -12.0 + i / 100.0;
      worst = std::max(worst, std::abs(phi.net.eval1(x) - Phi(x)));
    }
    CHECK(worst <= eps);
    CHECK(phi.net.eval1(0.0) == doctest::Approx(0.5).epsilon(eps));
    CHECK(phi.net.eval1(1e6) == doctest::Approx(1.0).epsilon(eps));
  }
  CHECK_THROWS_AS(normal_cdf_net(0.0), Error);
  CHECK_THROWS_AS(normal_cdf_net(0.6), Error);
}

TEST_CASE("inverter hand-traced example") {
  const Built inv = binary_search_inverter(identity_network(1), 0.0, 1.0, 3, 1.0);
  CHECK(inv.net.flavor() == Flavor::kReluStep);
  CHECK(inv.net.eval1(0.3) == doctest::Approx(0.3125));
  CHECK(inv.cert.target_eps == doctest::Approx(0.125));
}

TEST_CASE("inverter at a stage tie stays within the certified bound") {
  // y = 0.5 sits on the first comparison point: f(.5) >= y sets high = .5,
  // every later stage moves low up, and the output is the final midpoint
  // 0.5 - 2^-(t+1).
  for (int t : {1, 3, 8}) {
    const Built inv = binary_search_inverter(identity_network(1), 0.0, 1.0, t, 1.0);
    CHECK(inv.net.eval1(0.5) == doctest::Approx(0.5 - std::ldexp(1.0, -(t + 1))));
    CHECK(std::abs(inv.net.eval1(0.5) - 0.5) <= inv.cert.target_eps);
  }
}

TEST_CASE("inverter sandwich on a monotone ramp") {
  // f(x) = 2x + 1 on [0, 3]; the inverse has Lipschitz constant 1/2.
  const std::vector<double> w{2.0}, b{1.0};
  const Network f = affine_network(1, 1, w, b);
  const int t = 10;
  const Built inv = binary_search_inverter(f, 0.0, 3.0, t, 0.5);
  for (int i = 0; i <= 300; ++i) {
    const double x = 3.0 * i / 300.0;
    if (near_stage_point(x, 0.0, 3.0, t, 1e-9)) continue;
    const double got = inv.net.eval1(2 * x + 1);
    CHECK(std::abs(got - x) <= inv.cert.target_eps);
  }
}

TEST_CASE("inverse normal cdf within eps away from ties") {
  const double eps = 0.1;
  const InverseNormalParams p = inverse_normal_params(eps);
  CHECK(p.b == doctest::Approx(std::log(10.0)));
  CHECK(p.t == static_cast<int>(std::ceil(std::log2(2 * (p.b - p.a) / eps))));
  const Built inv = inverse_normal_cdf_net(p, eps);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(Phi(p.a), Phi(p.b));
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const double y = u(rng);
    const double x = quantile(y);
    if (near_stage_point(x, p.a, p.b, p.t, 1e-6)) continue;
    CHECK(std::abs(inv.net.eval1(y) - x) <= eps);
    ++checked;
  }
  CHECK(checked > 350);
}

TEST_CASE("uniform to normal meets the transport target") {
  const double eps = 0.2;
  const Built un = uniform_to_normal_net(eps);
  CHECK(un.net.flavor() == Flavor::kReluOnly);
  const double w = wasserstein_1d_normal(pushforward_cdf_1d(un.net, 0.0, 1.0));
  CHECK(w <= eps);
  CHECK(un.cert.detail("exception_cost_bound") < eps / 10.0);
  CHECK(std::abs(un.net.eval1(0.5)) <= 0.2);
  CHECK(un.net.eval1(0.9) > 0.0);
  CHECK(un.net.eval1(0.1) < 0.0);
}

TEST_CASE("analytic gadgets") {
  struct Case {
    GadgetKind kind;
    double a, b, alpha;
    double (*f)(double, double);
  };
  const Case cases[] = {
      {GadgetKind::kExp, -1.0, 1.0, 0.0, [](double x, double) { return std::exp(x); }},
      {GadgetKind::kLn, 0.1, 2.0, 0.0, [](double x, double) { return std::log(x); }},
      {GadgetKind::kCos, -3.2, 3.2, 0.0, [](double x, double) { return std::cos(x); }},
      {GadgetKind::kSin, -3.2, 3.2, 0.0, [](double x, double) { return std::sin(x); }},
      {GadgetKind::kPow, 0.25, 4.0, 0.5, [](double x, double al) { return std::pow(x, al); }},
  };
  for (const auto& c : cases) {
    const double eps = 1e-3;
    const Built g = analytic_gadget(c.kind, c.a, c.b, eps, c.alpha);
    double worst = 0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = c.a + (c.b - c.a) * i / 1000.0;
      worst = std::max(worst, std::abs(g.net.eval1(x) - c.f(x, c.alpha)));
    }
    CAPTURE(to_string(c.kind));
    CHECK(worst <= eps);
  }
  CHECK_THROWS_AS(analytic_gadget(GadgetKind::kLn, 0.0, 1.0, 0.1), Error);
  CHECK(gadget_kind_from_string("cos") == GadgetKind::kCos);
  CHECK_THROWS_AS(gadget_kind_from_string("tan"), Error);
}

TEST_CASE("box muller anchors") {
  const double eps = 0.1;
  const Built bm = box_muller_net(eps);
  struct Anchor {
    double x1, x2, z1, z2;
  };
  const Anchor anchors[] = {{std::exp(-0.5), 0.0, 1.0, 0.0},
                            {std::exp(-0.5), 0.25, 0.0, 1.0},
                            {std::exp(-2.0), 0.5, -2.0, 0.0}};
  for (const auto& a : anchors) {
    const auto z = bm.net.eval(std::vector<double>{a.x1, a.x2});
    CHECK(std::abs(z[0] - a.z1) <= eps);
    CHECK(std::abs(z[1] - a.z2) <= eps);
  }
  CHECK(bm.cert.zeta == doctest::Approx(bm.cert.detail("x1_min")));
}
