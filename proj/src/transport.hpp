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

#ifndef PUSHFORGE_TRANSPORT_HPP_
#define PUSHFORGE_TRANSPORT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "builders.hpp"
#include "network.hpp"

namespace pushforge {

// Right-continuous distribution function, linear between breakpoints. A jump
// is two consecutive entries with the same breakpoint. Values start at 0 and
// end at 1; the function is 0 left of the first breakpoint and 1 right of
// the last.
struct PiecewiseLinearCdf {
  std::vector<double> x, v;

  void validate() const;
  double operator()(double t) const;
  // Limits at t from the left and from the right.
  void limits(double t, double& left, double& right) const;

  static PiecewiseLinearCdf uniform(double a, double b);
  static PiecewiseLinearCdf point_mass(double c);
};

// Exact CDF of net # U[a, b] for a univariate net: every affine piece adds a
// uniform component, or a point mass when it is flat.
PiecewiseLinearCdf pushforward_cdf_1d(const Network& net, double a = 0.0, double b = 1.0);

// Step-function CDF of equally weighted samples.
PiecewiseLinearCdf empirical_cdf(std::vector<double> samples);

// Integral of |F - G|.
double wasserstein_1d(const PiecewiseLinearCdf& F, const PiecewiseLinearCdf& G);
// Integral of |F - Phi| against the standard normal, segment by segment in
// closed form; tails use the exact tail integrals of Phi.
double wasserstein_1d_normal(const PiecewiseLinearCdf& F);

struct EmpiricalDistribution {
  std::size_t dim = 0;
  std::vector<double> points;   // count x dim, row-major
  std::vector<double> weights;  // count

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, dim};
  }
  void validate() const;
  static EmpiricalDistribution uniform_weights(std::size_t dim, std::vector<double> points);
};

inline constexpr std::size_t kMaxExactMatchingPoints = 4096;

// Exact Euclidean W1 between equal-size uniform-weight sets via min-cost
// perfect matching.
double empirical_wasserstein(const EmpiricalDistribution& A, const EmpiricalDistribution& B);

// Dense rectangular-free assignment: returns row -> column minimizing the
// total of cost[i * n + j].
std::vector<std::size_t> solve_assignment(std::size_t n, std::span<const double> cost);

enum class SourceKind { kUniformBox, kStandardNormal };

struct SourceDistribution {
  SourceKind kind = SourceKind::kUniformBox;
  std::size_t dims = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  // Uniform box only: jitter one point inside each cell of a regular grid
  // (1-D strata, or a near-square 2-D grid) instead of independent draws.
  bool stratified = false;
};

// Draws count points from the source, deterministically in (seed, stream).
std::vector<double> draw_source(const SourceDistribution& source, std::size_t count,
                                unsigned jobs = 1);

EmpiricalDistribution sample_pushforward(const Network& net, const SourceDistribution& source,
                                         std::size_t count, unsigned jobs = 1);

bool box_coupling_check(const Network& net, const SpaceFillingPlan& plan, int grid_per_box);

struct SupErrorResult {
  double max_abs_error = 0.0;
  std::size_t argmax = 0;
  std::vector<double> argmax_point;
};

using Oracle = std::function<std::vector<double>(std::span<const double>)>;

// grid: count x input_dim points, row-major.
SupErrorResult sup_error(const Network& net, const Oracle& oracle,
                         std::span<const double> grid);

}  // namespace pushforge

#endif  // PUSHFORGE_TRANSPORT_HPP_
