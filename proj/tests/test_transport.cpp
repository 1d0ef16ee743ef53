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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "builders.hpp"
#include "doctest.h"
#include "normal.hpp"
#include "rng.hpp"
#include "transport.hpp"

using namespace pushforge;

namespace {

// W1 between two CDFs by midpoint quadrature of |F - G| over [lo, hi],
// split at `cuts` so that jumps fall on cell edges.
double quad_w1(const PiecewiseLinearCdf& F, const std::function<double(double)>& G,
               double lo, double hi, std::vector<double> cuts = {}) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double s = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const int n = 100000;
    const double h = (cuts[c + 1] - cuts[c]) / n;
    for (int i = 0; i < n; ++i) {
      const double x = cuts[c] + (i + 0.5) * h;
      s += std::abs(F(x) - G(x)) * h;
    }
  }
  return s;
}

double brute_force_assignment(std::size_t n, const std::vector<double>& cost) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += cost[i * n + perm[i]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("reference normal functions") {
  CHECK(normal_cdf_ref(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-14));
  CHECK(normal_cdf_ref(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
  for (double p : {1e-10, 0.01, 0.3, 0.5, 0.9, 0.999999}) {
    CHECK(normal_cdf_ref(normal_quantile_ref(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(normal_quantile_ref(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  // d/dx (x Phi + phi) = Phi.
  const double x = 0.7, h = 1e-5;
  CHECK((normal_cdf_antiderivative(x + h) - normal_cdf_antiderivative(x - h)) / (2 * h) ==
        doctest::Approx(normal_cdf_ref(x)).epsilon(1e-8));
}

TEST_CASE("integral of |Phi - line| matches quadrature") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    double p = u(rng), q = u(rng);
    if (p > q) std::swap(p, q);
    const double yp = 0.5 + 0.3 * u(rng) / 3, slope = 0.2 * u(rng);
    const int n = 200000;
    const double h = (q - p) / n;
    double s = 0;
    for (int i = 0; i < n; ++i) {
      const double x = p + (i + 0.5) * h;
      s += std::abs(0.5 * std::erfc(-x / std::numbers::sqrt2) - (yp + slope * (x - p)));
    }
    CHECK(integral_abs_cdf_minus_line(p, q, yp, slope) == doctest::Approx(s * h).epsilon(1e-6));
  }
}

TEST_CASE("pushforward cdf of simple nets") {
  const PiecewiseLinearCdf F = pushforward_cdf_1d(tent_map_net(2));
  // tent # U = U[0, 1].
  for (double t : {-0.5, 0.0, 0.2, 0.5, 0.77, 1.0, 2.0}) {
    CHECK(F(t) == doctest::Approx(std::clamp(t, 0.0, 1.0)).epsilon(1e-12));
  }
  const std::vector<double> w{3.0}, b{-1.0};
  const PiecewiseLinearCdf G = pushforward_cdf_1d(affine_network(1, 1, w, b), 0.0, 1.0);
  CHECK(G(0.5) == doctest::Approx(0.5));  // U[-1, 2]
  // relu(x - 0.5) on [0, 1]: mass 1/2 at zero, then uniform on [0, 0.5].
  AffineLayer h(1, 1, Activation::kReLU);
  h.w(0, 0) = 1;
  h.bias[0] = -0.5;
  AffineLayer o(1, 1, Activation::kIdentity);
  o.w(0, 0) = 1;
  const PiecewiseLinearCdf R = pushforward_cdf_1d(Network({h, o}, Flavor::kReluOnly));
  double left, right;
  R.limits(0.0, left, right);
  CHECK(left == doctest::Approx(0.0));
  CHECK(right == doctest::Approx(0.5));
  CHECK(R(0.25) == doctest::Approx(0.75));
}

TEST_CASE("wasserstein examples") {
  using C = PiecewiseLinearCdf;
  CHECK(wasserstein_1d(C::point_mass(0), C::point_mass(2)) == doctest::Approx(2.0));
  CHECK(wasserstein_1d(C::uniform(0, 1), C::uniform(0.5, 1.5)) == doctest::Approx(0.5));
  CHECK(wasserstein_1d(C::uniform(0, 1), C::point_mass(0.5)) == doctest::Approx(0.25));
  CHECK(wasserstein_1d(C::uniform(0, 1), C::uniform(0, 1)) == doctest::Approx(0.0));
  // E|Z| for Z ~ N(0, 1).
  CHECK(wasserstein_1d_normal(C::point_mass(0)) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
  const auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  const C U = C::uniform(-1.5, 2.0);
  CHECK(wasserstein_1d_normal(U) ==
        doctest::Approx(quad_w1(U, Phi, -12, 12, {-1.5, 2.0})).epsilon(1e-7));
  const C E = empirical_cdf({-1.0, 0.3, 0.3, 2.5});
  CHECK(wasserstein_1d_normal(E) ==
        doctest::Approx(quad_w1(E, Phi, -12, 12, {-1.0, 0.3, 2.5})).epsilon(1e-7));
}

TEST_CASE("empirical matching examples") {
  const auto A = EmpiricalDistribution::uniform_weights(2, {0, 0, 1, 0});
  const auto B = EmpiricalDistribution::uniform_weights(2, {1, 1, 0, 1});
  CHECK(empirical_wasserstein(A, B) == doctest::Approx(1.0));
  const auto C = EmpiricalDistribution::uniform_weights(1, {0, 1, 2});
  const auto D = EmpiricalDistribution::uniform_weights(1, {2, 0, 1});
  CHECK(empirical_wasserstein(C, D) == doctest::Approx(0.0));
  const auto E = EmpiricalDistribution::uniform_weights(1, {0, 1});
  CHECK_THROWS_AS(empirical_wasserstein(C, E), Error);
}

TEST_CASE("1-D matching equals the sorted coupling") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(60), b(60);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = 2 * g(rng) + 0.5;
    const double w = empirical_wasserstein(EmpiricalDistribution::uniform_weights(1, a),
                                           EmpiricalDistribution::uniform_weights(1, b));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    CHECK(w == doctest::Approx(s / 60).epsilon(1e-12));
    CHECK(wasserstein_1d(empirical_cdf(a), empirical_cdf(b)) ==
          doctest::Approx(s / 60).epsilon(1e-12));
  }
}

TEST_CASE("assignment agrees with brute force") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 10);
  for (std::size_t n = 1; n <= 7; ++n) {
    std::vector<double> cost(n * n);
    for (auto& c : cost) c = u(rng);
    const auto a = solve_assignment(n, cost);
    double s = 0;
    std::vector<char> used(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(!used[a[i]]);
      used[a[i]] = 1;
      s += cost[i * n + a[i]];
    }
    CHECK(s == doctest::Approx(brute_force_assignment(n, cost)).epsilon(1e-12));
  }
}

TEST_CASE("matching triangle inequality") {
  SourceDistribution s{SourceKind::kUniformBox, 2, 1, 0, false};
  const auto draw = [&](std::uint64_t stream) {
    s.stream = stream;
    return EmpiricalDistribution::uniform_weights(2, draw_source(s, 80));
  };
  const auto A = draw(1), B = draw(2), C = draw(3);
  CHECK(empirical_wasserstein(A, C) <=
        empirical_wasserstein(A, B) + empirical_wasserstein(B, C) + 1e-12);
}

TEST_CASE("matching budget") {
  const auto A = EmpiricalDistribution::uniform_weights(
      1, std::vector<double>(kMaxExactMatchingPoints + 1, 0.0));
  try {
    empirical_wasserstein(A, A);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBudget);
  }
}

TEST_CASE("philox known-answer vectors") {
  const auto r0 = philox4x64({0, 0, 0, 0}, {0, 0});
  CHECK(r0 == PhiloxCounter{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL,
                            0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
  const std::uint64_t f = ~0ULL;
  const auto r1 = philox4x64({f, f, f, f}, {f, f});
  CHECK(r1 == PhiloxCounter{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL,
                            0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
  const auto r2 = philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL,
                              0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                             {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  CHECK(r2 == PhiloxCounter{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL,
                            0xa5a1610e72fd18b5ULL, 0x57bd43b5e52b7fe6ULL});
}

TEST_CASE("draws are deterministic and independent of job count") {
  SourceDistribution s{SourceKind::kStandardNormal, 2, 42, 7, false};
  const auto a = draw_source(s, 5000, 1), b = draw_source(s, 5000, 3);
  CHECK(a == b);
  s.stream = 8;
  CHECK(draw_source(s, 5000, 1) != a);
  const auto one = draw_source(s, 10);
  const auto more = draw_source(s, 20);
  CHECK(std::equal(one.begin(), one.end(), more.begin()));
  SourceDistribution n{SourceKind::kStandardNormal, 1, 1, 0, true};
  CHECK_THROWS_AS(draw_source(n, 10), Error);
}

TEST_CASE("uniform draws pass a KS check") {
  SourceDistribution s{SourceKind::kUniformBox, 1, 5, 0, false};
  auto x = draw_source(s, 20000);
  std::sort(x.begin(), x.end());
  double ks = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ks = std::max({ks, std::abs(x[i] - double(i) / x.size()),
                   std::abs(x[i] - double(i + 1) / x.size())});
  }
  CHECK(ks < 1.63 / std::sqrt(20000.0));  // 1% level
  for (double v : x) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("normal draws pass a KS check") {
  SourceDistribution s{SourceKind::kStandardNormal, 1, 5, 1, false};
  auto x = draw_source(s, 20000);
  std::sort(x.begin(), x.end());
  double ks = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = 0.5 * std::erfc(-x[i] / std::numbers::sqrt2);
    ks = std::max({ks, std::abs(F - double(i) / x.size()), std::abs(F - double(i + 1) / x.size())});
  }
  CHECK(ks < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("stratified draws fill every cell") {
  SourceDistribution s{SourceKind::kUniformBox, 1, 5, 2, true};
  const auto x = draw_source(s, 100);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i] >= i / 100.0);
    CHECK(x[i] < (i + 1) / 100.0);
  }
  s.dims = 2;
  const auto y = draw_source(s, 100);  // 10 x 10 grid
  std::vector<int> hits(100, 0);
  for (std::size_t i = 0; i < 100; ++i) {
    hits[static_cast<int>(y[2 * i] * 10) * 10 + static_cast<int>(y[2 * i + 1] * 10)]++;
  }
  CHECK(std::count(hits.begin(), hits.end(), 1) == 100);
}

TEST_CASE("sample pushforward evaluates the net") {
  SourceDistribution s{SourceKind::kUniformBox, 1, 3, 0, false};
  const Network t = tent_map_net(3);
  const auto src = draw_source(s, 50);
  const auto out = sample_pushforward(t, s, 50, 2);
  REQUIRE(out.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) CHECK(out.point(i)[0] == t.eval1(src[i]));
  s.dims = 2;
  CHECK_THROWS_AS(sample_pushforward(t, s, 10), Error);
}

TEST_CASE("box coupling") {
  const auto [net, plan] = space_filling_net(1, 2, 20, 2);
  CHECK(box_coupling_check(net, plan, 3));
  const auto [net2, plan2] = space_filling_net(2, 4, 40, 2);
  CHECK(box_coupling_check(net2, plan2, 2));
  // A perturbed first weight breaks the coupling.
  std::vector<AffineLayer> layers(net.layers().begin(), net.layers().end());
  layers[0].weights[0] += 0.5;
  const Network bad(layers, net.flavor());
  CHECK_FALSE(box_coupling_check(bad, plan, 3));
}

TEST_CASE("sup error") {
  const Network t = tent_map_net(2);
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto r = sup_error(t, [](std::span<const double> x) {
    return std::vector<double>{x[0]};
  }, grid);
  CHECK(r.max_abs_error == doctest::Approx(1.0));
  CHECK(r.argmax == 4);
  CHECK(r.argmax_point == std::vector<double>{1.0});
  const auto z = sup_error(t, [](std::span<const double> x) {
    return std::vector<double>{1.0 - std::abs(2.0 * x[0] - 1.0)};
  }, grid);
  CHECK(z.max_abs_error == doctest::Approx(0.0));
}
