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

#include "bounds.hpp"
#include "builders.hpp"
#include "doctest.h"
#include "lp.hpp"
#include "regions.hpp"

using namespace pushforge;

namespace {

Network quadrant_net() {
  // (x, y) -> relu(x) + relu(y): four linear regions on [-1, 1]^2.
  AffineLayer h(2, 2, Activation::kReLU);
  h.w(0, 0) = 1;
  h.w(1, 1) = 1;
  AffineLayer o(1, 2, Activation::kIdentity);
  o.w(0, 0) = 1;
  o.w(0, 1) = 1;
  return Network({h, o}, Flavor::kReluOnly);
}

Network random_net(std::mt19937_64& rng, std::size_t in, std::vector<std::size_t> widths) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<AffineLayer> layers;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const bool last = i + 1 == widths.size();
    AffineLayer a(widths[i], in, last ? Activation::kIdentity : Activation::kReLU);
    for (double& w : a.weights) w = g(rng);
    for (double& b : a.bias) b = 0.5 * g(rng);
    layers.push_back(a);
    in = widths[i];
  }
  return Network(layers, Flavor::kReluOnly);
}

}  // namespace

TEST_CASE("simplex solves a small program") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6 -> (1.6, 1.2), value 2.8
  const LpResult r = simplex_maximize({1, 1}, {{1, 2}, {3, 1}}, {4, 6});
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(2.8));
  CHECK(simplex_maximize({1}, {{-1}}, {-1}).status == LpStatus::kUnbounded);
  CHECK(simplex_maximize({1}, {{1}}, {-1}).status == LpStatus::kInfeasible);
}

TEST_CASE("chebyshev center of a triangle") {
  // x + y <= 1 inside [0, 1]^2: inradius 1 / (2 + sqrt 2).
  const ChebyshevBall b = chebyshev_center({{{1, 1}, 1.0}}, {0, 0}, {1, 1});
  REQUIRE(b.nonempty);
  CHECK(b.radius == doctest::Approx(1.0 / (2.0 + std::sqrt(2.0))));
}

TEST_CASE("region counts of simple nets") {
  CHECK(enumerate_regions(tent_map_net(4), Box::unit(1)).size() == 4);
  const std::vector<double> w{1.0, -2.0}, b{0.5};
  CHECK(enumerate_regions(affine_network(1, 2, w, b), Box::unit(2)).size() == 1);
  const Box sq{{-1, -1}, {1, 1}};
  CHECK(enumerate_regions(quadrant_net(), sq).size() == 4);
}

TEST_CASE("region maps agree with the network at interior points") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Network net = random_net(rng, 2, {4, 3, 2});
    const Box dom{{-1, -1}, {1, 1}};
    const auto regions = enumerate_regions(net, dom);
    REQUIRE(!regions.empty());
    for (const auto& r : regions) {
      const auto& c = r.interior_point;
      CHECK(r.contains(c, 1e-12));
      const auto y = net.eval(c), z = r.apply(c);
      for (std::size_t k = 0; k < y.size(); ++k) CHECK(std::abs(y[k] - z[k]) <= 1e-9);
      // Jacobian by central differences inside the inscribed ball.
      const double h = 0.25 * r.inradius;
      if (h < 1e-7) continue;
      for (std::size_t j = 0; j < 2; ++j) {
        std::vector<double> p = c, m = c;
        p[j] += h;
        m[j] -= h;
        const auto yp = net.eval(p), ym = net.eval(m);
        for (std::size_t k = 0; k < y.size(); ++k)
          CHECK(std::abs((yp[k] - ym[k]) / (2 * h) - r.matrix[k * 2 + j]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("regions cover the domain") {
  std::mt19937_64 rng(5);
  const Network net = random_net(rng, 2, {5, 4, 1});
  const Box dom{{-1, -1}, {1, 1}};
  const auto regions = enumerate_regions(net, dom);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    int hits = 0;
    for (const auto& r : regions)
      if (r.contains(x, 1e-9)) {
        ++hits;
        CHECK(std::abs(r.apply(x)[0] - net.eval(x)[0]) <= 1e-9);
      }
    CHECK(hits >= 1);
  }
}

TEST_CASE("region counts respect the piece bound") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t w1 = 2 + trial % 4, w2 = 2 + (trial / 4) % 3;
    const Network net = random_net(rng, 2, {w1, w2, 1});
    const Box dom{{-1, -1}, {1, 1}};
    const double count = static_cast<double>(enumerate_regions(net, dom).size());
    CHECK(count <= affine_piece_bound(static_cast<int>(net.node_count()), 2, 2));
  }
}

TEST_CASE("region budget is enforced") {
  RegionOptions opt;
  opt.budget = 3;
  try {
    enumerate_regions(tent_map_net(16), Box::unit(1), opt);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBudget);
  }
}

TEST_CASE("breakpoints of tent maps") {
  const auto bp = breakpoints_1d(tent_map_net(4), 0.0, 1.0);
  const std::vector<double> expect{0.0, 0.25, 0.5, 0.75, 1.0};
  REQUIRE(bp.size() == expect.size());
  for (std::size_t i = 0; i < bp.size(); ++i) CHECK(bp[i] == doctest::Approx(expect[i]));
  const auto pieces = affine_pieces_1d(tent_map_net(4), 0.0, 1.0);
  REQUIRE(pieces.size() == 4);
  CHECK(pieces.slope[0] == doctest::Approx(4.0));
  CHECK(pieces.slope[1] == doctest::Approx(-4.0));
  const std::vector<double> w{2.0}, b{1.0};
  CHECK(breakpoints_1d(affine_network(1, 1, w, b), -1.0, 3.0).size() == 2);
}
