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

#ifndef PUSHFORGE_REGIONS_HPP_
#define PUSHFORGE_REGIONS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "lp.hpp"
#include "network.hpp"

namespace pushforge {

struct Box {
  std::vector<double> lo, hi;
  std::size_t dim() const { return lo.size(); }
  static Box unit(std::size_t dim) { return {std::vector<double>(dim, 0.0),
                                             std::vector<double>(dim, 1.0)}; }
};

// One bit per hidden unit, in layer-major order.
using ActivationPattern = std::vector<std::uint8_t>;

struct PolyhedralRegion {
  std::vector<Halfspace> constraints;  // excludes the domain box itself
  std::size_t out_dim = 0, in_dim = 0;
  std::vector<double> matrix;  // out_dim x in_dim, row-major
  std::vector<double> offset;  // out_dim
  ActivationPattern pattern;
  std::vector<double> interior_point;  // Chebyshev center
  double inradius = 0.0;

  std::vector<double> apply(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = 0.0) const;
};

// Work cap for enumeration, counted in LP solves. Taken from the
// PUSHFORGE_BUDGET environment variable when set, otherwise 2'000'000.
std::size_t default_region_budget();

struct RegionOptions {
  std::size_t budget = default_region_budget();
  // Regions whose inscribed ball is smaller than this (relative to the box
  // extent) are treated as degenerate and dropped.
  double min_relative_radius = 1e-10;
};

// Splits the domain by activation pattern, one hidden unit at a time, keeping
// only LP-feasible branches. A pre-activation of exactly zero counts as
// inactive. Result is sorted by interior point.
std::vector<PolyhedralRegion> enumerate_regions(const Network& net, const Box& domain,
                                                const RegionOptions& options = {});

// Maximal affine pieces of a univariate-input net on [a, b]. Pieces are
// contiguous, and adjacent pieces carrying the same affine map are merged.
struct Pieces1d {
  std::size_t out_dim = 0;
  std::vector<double> x0, x1;  // piece endpoints
  std::vector<double> y0;      // outputs at x0, out_dim per piece
  std::vector<double> slope;   // out_dim per piece
  std::size_t size() const { return x0.size(); }
};

Pieces1d affine_pieces_1d(const Network& net, double a, double b);

// Sorted {a, kinks..., b}.
std::vector<double> breakpoints_1d(const Network& net, double a, double b);

}  // namespace pushforge

#endif  // PUSHFORGE_REGIONS_HPP_
