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


#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "normal.hpp"

namespace pushforge {

namespace {

void check_dims(int n, int d) {
  require(n >= 1 && d >= n, "bounds need 1 <= n <= d");
}

double capped_power_bound(int d, double base, double exponent) {
  const double diameter = std::sqrt(static_cast<double>(d));
  if (exponent <= 0.0 || base < 2.0) return diameter;
  return diameter * std::pow(base, -exponent);
}

}  // namespace

double tent_upper_bound(int N, int L, int n, int d) {
  check_dims(n, d);
  require(L >= 1, "tent_upper_bound: L must be >= 1");
  require(N > d * L, "tent_upper_bound: insufficient carry nodes (N <= dL)");
  if (d == n) return 0.0;
  const int base = (N - d * L) / (n * L);
  const int run = (d - n + n - 1) / n;
  return capped_power_bound(d, base, L / run);
}

double tent_upper_bound_appendix(int N, int L, int n, int d) {
  check_dims(n, d);
  require(L >= 1, "tent_upper_bound_appendix: L must be >= 1");
  require(N > d * L, "tent_upper_bound_appendix: insufficient carry nodes (N <= dL)");
  if (d == n) return 0.0;
  const double base = std::floor(static_cast<double>(d - n) / n *
                                 static_cast<double>(N - d * L + d) / (static_cast<double>(d) * L));
  return capped_power_bound(d, base, (n * L) / d);
}

double affine_piece_bound(int N, int L, int n0) {
  require(N >= 1 && L >= 0 && n0 >= 1, "affine_piece_bound: bad parameters");
  if (L == 0) return 1.0;
  const double nl = static_cast<double>(n0) * L;
  return std::pow(std::numbers::e * N / nl + std::numbers::e, nl);
}

double plane_distance_bound(int n, int d, double l, double m_B) {
  require(n >= 1 && n < d, "plane_distance_bound needs 1 <= n < d");
  require(l > 0.0 && m_B > 0.0, "plane_distance_bound needs l, m_B > 0");
  const double gap = d - n;
  // Work in logs; the Gamma factors overflow for large d.
  const double log_inner = std::lgamma(gap / 2.0 + 1.0) + std::lgamma(n / 2.0 + 1.0) -
                           d / 2.0 * std::log(std::numbers::pi) - n * std::log(l) +
                           std::log(m_B);
  return gap / (gap + 1.0) * std::exp(log_inner / gap);
}

double dimension_gap_bound(int n, int d, double l, double m_B, double N_A) {
  require(N_A >= 1.0, "dimension_gap_bound needs N_A >= 1");
  return plane_distance_bound(n, d, l, m_B / N_A);
}

double network_lower_bound(int N, int L, int n, int d) {
  require(n >= 1 && n < d, "network_lower_bound needs 1 <= n < d");
  require(N >= 1 && L >= 1, "network_lower_bound needs N, L >= 1");
  return dimension_gap_bound(n, d, std::sqrt(static_cast<double>(d)) / 2.0, 1.0,
                             affine_piece_bound(N, L, n));
}

void BoundParams::validate() const {
  require(N >= 1 && L >= 1, "bound params: N, L must be >= 1");
  require(n >= 1 && n <= d, "bound params: need 1 <= n <= d");
  require(l > 0.0 && m_B > 0.0, "bound params: l and m_B must be positive");
  require(N_A == 0.0 || N_A >= 1.0, "bound params: N_A must be >= 1 (or 0 for the piece bound)");
}

BoundParams unit_cube_params(int N, int L, int n, int d) {
  BoundParams p;
  p.N = N;
  p.L = L;
  p.n = n;
  p.d = d;
  p.l = std::sqrt(static_cast<double>(d)) / 2.0;
  p.m_B = 1.0;
  p.N_A = 0.0;
  return p;
}

BoundReport bound_report(const BoundParams& p) {
  p.validate();
  BoundReport r;
  r.params = p;
  r.piece_bound = affine_piece_bound(p.N, p.L, p.n);
  const double pieces = p.N_A > 0.0 ? p.N_A : r.piece_bound;
  if (p.N > p.d * p.L) {
    r.tent_upper = tent_upper_bound(p.N, p.L, p.n, p.d);
    r.tent_upper_appendix = tent_upper_bound_appendix(p.N, p.L, p.n, p.d);
  } else {
    r.status = "skipped:N≤dL";
  }
  if (p.n < p.d) {
    r.plane_lower = plane_distance_bound(p.n, p.d, p.l, p.m_B);
    r.gap_lower = dimension_gap_bound(p.n, p.d, p.l, p.m_B, pieces);
    r.net_lower = network_lower_bound(p.N, p.L, p.n, p.d);
  } else if (r.status == "ok") {
    r.status = "n==d";
  }
  return r;
}

std::string to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["params"] = {{"N", r.params.N},     {"L", r.params.L},     {"n", r.params.n},
                 {"d", r.params.d},     {"l", r.params.l},     {"m_B", r.params.m_B},
                 {"N_A", r.params.N_A}};
  j["tent_upper"] = r.tent_upper;
  j["tent_upper_appendix"] = r.tent_upper_appendix;
  j["piece_bound"] = r.piece_bound;
  j["plane_lower"] = r.plane_lower;
  j["gap_lower"] = r.gap_lower;
  j["net_lower"] = r.net_lower;
  j["status"] = r.status;
  return j.dump(2);
}

std::string bound_csv_header() {
  return "N,L,n,d,l,m_B,N_A,tent_upper,tent_upper_appendix,piece_bound,plane_lower,"
         "gap_lower,net_lower,status";
}

std::string to_csv_row(const BoundReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,",
                r.params.N, r.params.L, r.params.n, r.params.d, r.params.l, r.params.m_B,
                r.params.N_A, r.tent_upper, r.tent_upper_appendix, r.piece_bound,
                r.plane_lower, r.gap_lower, r.net_lower);
  return std::string(buf) + r.status;
}

namespace {

double piece_error(double x0, double x1, double y0, double y1) {
  return integral_abs_cdf_minus_line(x0, x1, y0, (y1 - y0) / (x1 - x0));
}

double fit_error(const std::vector<double>& x, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) total += piece_error(x[i], x[i + 1], y[i], y[i + 1]);
  return total;
}

// Golden-section minimum of f on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi, int iters) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

PwlFit pwl_phi_fit(int pieces, double a, double b) {
  require(pieces >= 1, "pwl_phi_best_l1: N_A must be >= 1");
  require(a < b, "pwl_phi_best_l1: need a < b");
  const int G = std::max(401, 4 * pieces + 1);
  std::vector<double> gx(G), gy(G);
  for (int i = 0; i < G; ++i) {
    gx[i] = a + (b - a) * i / (G - 1);
    gy[i] = normal_cdf_ref(gx[i]);
  }
  gx[G - 1] = b;
  // Chord costs are only needed for spans a piece can plausibly cover; a
  // piece wider than 4x the mean never wins for a smooth target.
  const int max_span = std::min(G - 1, std::max(8, 4 * (G - 1) / pieces));
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> chord(static_cast<std::size_t>(G) * (max_span + 1), kInf);
  for (int i = 0; i < G; ++i) {
    for (int s = 1; s <= max_span && i + s < G; ++s) {
      chord[static_cast<std::size_t>(i) * (max_span + 1) + s] =
          piece_error(gx[i], gx[i + s], gy[i], gy[i + s]);
    }
  }
  // best[p][j]: p pieces ending at grid point j.
  std::vector<double> prev(G, kInf), cur(G);
  std::vector<int> from(static_cast<std::size_t>(pieces + 1) * G, -1);
  prev[0] = 0.0;
  for (int p = 1; p <= pieces; ++p) {
    std::fill(cur.begin(), cur.end(), kInf);
    for (int j = 1; j < G; ++j) {
      for (int s = 1; s <= max_span && s <= j; ++s) {
        const int i = j - s;
        if (prev[i] == kInf) continue;
        const double v = prev[i] + chord[static_cast<std::size_t>(i) * (max_span + 1) + s];
        if (v < cur[j]) {
          cur[j] = v;
          from[static_cast<std::size_t>(p) * G + j] = i;
        }
      }
    }
    prev.swap(cur);
  }
  // Fewer than `pieces` pieces is never better, but guard the path anyway.
  if (prev[G - 1] == kInf) fail_input("pwl_phi_best_l1: too many pieces for the grid");

  PwlFit fit;
  std::vector<int> idx{G - 1};
  for (int p = pieces, j = G - 1; p >= 1; --p) {
    j = from[static_cast<std::size_t>(p) * G + j];
    idx.push_back(j);
  }
  std::reverse(idx.begin(), idx.end());
  for (int i : idx) {
    fit.knots.push_back(gx[i]);
    fit.values.push_back(gy[i]);
  }
  fit.grid_l1_error = prev[G - 1];

  auto& x = fit.knots;
  auto& y = fit.values;
  const std::size_t K = x.size();
  double err = fit_error(x, y);
  for (int sweep = 0; sweep < 400; ++sweep) {
    const double before = err;
    for (std::size_t j = 0; j < K; ++j) {
      const double left = j > 0 ? x[j - 1] : x[j];
      const double right = j + 1 < K ? x[j + 1] : x[j];
      auto local = [&](double xj, double yj) {
        double e = 0.0;
        if (j > 0) e += piece_error(x[j - 1], xj, y[j - 1], yj);
        if (j + 1 < K) e += piece_error(xj, x[j + 1], yj, y[j + 1]);
        return e;
      };
      // |Phi''| <= phi(1) < 0.25 bounds how far the best value can sit from
      // the curve.
      const double w = 0.25 * (right - left) * (right - left) + 1e-15;
      const double base = local(x[j], y[j]);
      const double ny = golden_min([&](double v) { return local(x[j], v); }, y[j] - w, y[j] + w, 40);
      if (local(x[j], ny) < base) y[j] = ny;
      if (j > 0 && j + 1 < K) {
        const double b0 = local(x[j], y[j]);
        const double nx = golden_min([&](double u) { return local(u, y[j]); },
                                     0.5 * (left + x[j]), 0.5 * (x[j] + right), 40);
        if (local(nx, y[j]) < b0) x[j] = nx;
      }
    }
    err = fit_error(x, y);
    if (before - err <= 1e-6 * before) break;
  }
  fit.l1_error = err;
  return fit;
}

double pwl_phi_best_l1(int pieces, double a, double b) { return pwl_phi_fit(pieces, a, b).l1_error; }

}  // namespace pushforge
