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

#include "normal.hpp"
#include "regions.hpp"
#include "transport.hpp"

namespace pushforge {

void PiecewiseLinearCdf::validate() const {
  auto bad = [](const std::string& why) { throw Error(ErrorKind::kInput, "malformed CDF: " + why); };
  if (x.empty() || x.size() != v.size()) bad("breakpoints and values differ in length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) bad("non-finite entry");
    if (v[i] < -1e-12 || v[i] > 1.0 + 1e-12) bad("value outside [0, 1]");
    if (i > 0 && x[i] < x[i - 1]) bad("breakpoints not sorted");
    if (i > 0 && v[i] < v[i - 1] - 1e-12) bad("values decrease");
  }
  if (std::abs(v.front()) > 1e-9 || std::abs(v.back() - 1.0) > 1e-9) {
    bad("values must run from 0 to 1");
  }
}

void PiecewiseLinearCdf::limits(double t, double& left, double& right) const {
  if (t < x.front()) {
    left = right = 0.0;
    return;
  }
  if (t > x.back()) {
    left = right = 1.0;
    return;
  }
  const auto lo = std::lower_bound(x.begin(), x.end(), t);
  const auto hi = std::upper_bound(x.begin(), x.end(), t);
  if (lo != hi) {
    left = v[lo - x.begin()];
    right = v[hi - x.begin() - 1];
    if (lo == x.begin()) left = 0.0;
    if (hi == x.end()) right = 1.0;
    return;
  }
  const std::size_t j = hi - x.begin();  // x[j-1] < t < x[j]
  const double f = (t - x[j - 1]) / (x[j] - x[j - 1]);
  left = right = v[j - 1] + f * (v[j] - v[j - 1]);
}

double PiecewiseLinearCdf::operator()(double t) const {
  double l, r;
  limits(t, l, r);
  return r;
}

PiecewiseLinearCdf PiecewiseLinearCdf::uniform(double a, double b) {
  require(a < b, "uniform CDF needs a < b");
  return {{a, b}, {0.0, 1.0}};
}

PiecewiseLinearCdf PiecewiseLinearCdf::point_mass(double c) { return {{c, c}, {0.0, 1.0}}; }

PiecewiseLinearCdf pushforward_cdf_1d(const Network& net, double a, double b) {
  require(net.input_dim() == 1 && net.output_dim() == 1,
          "pushforward_cdf_1d needs a univariate network");
  require(net.flavor() == Flavor::kReluOnly, "pushforward_cdf_1d needs a relu_only network");
  const Pieces1d pcs = affine_pieces_1d(net, a, b);

  struct Event {
    double pos;
    long double dens;  // change in density
    long double jump;
    int active;
  };
  std::vector<Event> ev;
  ev.reserve(2 * pcs.size());
  const double span = b - a;
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    const double w = (pcs.x1[i] - pcs.x0[i]) / span;
    if (w <= 0.0) continue;
    const double y0 = pcs.y0[i];
    const double y1 = y0 + pcs.slope[i] * (pcs.x1[i] - pcs.x0[i]);
    const double lo = std::min(y0, y1), hi = std::max(y0, y1);
    // Near-flat pieces become point masses; the transport error of that is
    // below w * 1e-9.
    if (hi - lo <= 1e-9 * std::max(1.0, std::abs(lo))) {
      ev.push_back({0.5 * (lo + hi), 0.0L, static_cast<long double>(w), 0});
    } else {
      const long double d = static_cast<long double>(w) / (hi - lo);
      ev.push_back({lo, d, 0.0L, 1});
      ev.push_back({hi, -d, 0.0L, -1});
    }
  }
  std::sort(ev.begin(), ev.end(), [](const Event& p, const Event& q) { return p.pos < q.pos; });

  PiecewiseLinearCdf F;
  long double value = 0.0L, density = 0.0L;
  int active = 0;
  double prev = ev.empty() ? 0.0 : ev.front().pos;
  std::size_t i = 0;
  while (i < ev.size()) {
    const double pos = ev[i].pos;
    value += density * (static_cast<long double>(pos) - prev);
    F.x.push_back(pos);
    F.v.push_back(static_cast<double>(value));
    long double jump = 0.0L;
    for (; i < ev.size() && ev[i].pos == pos; ++i) {
      jump += ev[i].jump;
      density += ev[i].dens;
      active += ev[i].active;
    }
    if (active == 0) density = 0.0L;  // drop accumulated rounding
    if (jump > 0.0L) {
      value += jump;
      F.x.push_back(pos);
      F.v.push_back(static_cast<double>(value));
    }
    prev = pos;
  }
  // Canonical ends and monotone values despite rounding.
  F.v.front() = 0.0;
  double run = 0.0;
  for (double& v : F.v) {
    v = std::clamp(v, run, 1.0);
    run = v;
  }
  F.v.back() = 1.0;
  return F;
}

PiecewiseLinearCdf empirical_cdf(std::vector<double> samples) {
  require(!samples.empty(), "empirical_cdf: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  PiecewiseLinearCdf F;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double x = samples[i];
    if (!std::isfinite(x)) fail_input("empirical_cdf: non-finite sample");
    F.x.push_back(x);
    F.v.push_back(static_cast<double>(i) / n);
    while (i < samples.size() && samples[i] == x) ++i;
    F.x.push_back(x);
    F.v.push_back(static_cast<double>(i) / n);
  }
  F.v.back() = 1.0;
  return F;
}

namespace {

// Integral of |d| for d linear from d0 to d1 over a segment of length len.
double abs_linear_integral(double d0, double d1, double len) {
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) {
    return 0.5 * std::abs(d0 + d1) * len;
  }
  return 0.5 * (d0 * d0 + d1 * d1) / (std::abs(d0) + std::abs(d1)) * len;
}

}  // namespace

double wasserstein_1d(const PiecewiseLinearCdf& F, const PiecewiseLinearCdf& G) {
  F.validate();
  G.validate();
  std::vector<double> grid;
  grid.reserve(F.x.size() + G.x.size());
  std::merge(F.x.begin(), F.x.end(), G.x.begin(), G.x.end(), std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double u = grid[i], w = grid[i + 1];
    double fl, fr, gl, gr, fl2, fr2, gl2, gr2;
    F.limits(u, fl, fr);
    G.limits(u, gl, gr);
    F.limits(w, fl2, fr2);
    G.limits(w, gl2, gr2);
    total += abs_linear_integral(fr - gr, fl2 - gl2, w - u);
  }
  return total;
}

double wasserstein_1d_normal(const PiecewiseLinearCdf& F) {
  F.validate();
  const auto& x = F.x;
  const auto& v = F.v;
  double total = normal_lower_tail_integral(x.front()) + normal_upper_tail_integral(x.back());
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j + 1 < x.size() && x[j + 1] == x[i]) ++j;
    if (j + 1 >= x.size()) break;
    const double u = x[i], w = x[j + 1];
    const double right = v[j], left_next = v[j + 1];
    total += integral_abs_cdf_minus_line(u, w, right, (left_next - right) / (w - u));
    i = j + 1;
  }
  return total;
}

}  // namespace pushforge
