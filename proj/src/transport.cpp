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

#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <unordered_set>

#include "rng.hpp"

namespace pushforge {

void EmpiricalDistribution::validate() const {
  require(dim > 0, "empirical distribution: dim must be positive");
  require(points.size() == weights.size() * dim, "empirical distribution: size mismatch");
  double s = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "empirical distribution: bad weight");
    s += w;
  }
  for (double p : points) require(std::isfinite(p), "empirical distribution: non-finite point");
  require(std::abs(s - 1.0) <= 1e-12 * std::max<std::size_t>(1, weights.size()),
          "empirical distribution: weights must sum to 1");
}

EmpiricalDistribution EmpiricalDistribution::uniform_weights(std::size_t dim,
                                                             std::vector<double> points) {
  require(dim > 0 && points.size() % dim == 0, "empirical distribution: bad point array");
  EmpiricalDistribution e;
  e.dim = dim;
  const std::size_t n = points.size() / dim;
  e.points = std::move(points);
  e.weights.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  return e;
}

// Shortest augmenting paths with row/column potentials.
std::vector<std::size_t> solve_assignment(std::size_t n, std::span<const double> cost) {
  require(cost.size() == n * n, "solve_assignment: cost matrix must be n x n");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based columns; column 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      const double* row = cost.data() + (i0 - 1) * n;
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double empirical_wasserstein(const EmpiricalDistribution& A, const EmpiricalDistribution& B) {
  A.validate();
  B.validate();
  require(A.dim == B.dim, "empirical_wasserstein: dimension mismatch");
  require(A.size() == B.size(), "empirical_wasserstein: sets must have equal size");
  const std::size_t n = A.size();
  if (n > kMaxExactMatchingPoints) {
    throw Error(ErrorKind::kBudget, "empirical_wasserstein: " + std::to_string(n) +
                                        " points exceeds the matching budget of " +
                                        std::to_string(kMaxExactMatchingPoints));
  }
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(A.weights[i] - 1.0 / n) <= 1e-12 && std::abs(B.weights[i] - 1.0 / n) <= 1e-12,
            "empirical_wasserstein: exact path needs uniform weights");
  }
  if (n == 0) return 0.0;
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = A.point(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto b = B.point(j);
      double s = 0.0;
      for (std::size_t k = 0; k < A.dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      cost[i * n + j] = std::sqrt(s);
    }
  }
  const auto match = solve_assignment(n, cost);
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) total += cost[i * n + match[i]];
  return static_cast<double>(total / n);
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, count / 1024))));
  if (jobs <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (count + jobs - 1) / jobs;
  for (unsigned t = 0; t < jobs; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([=] { fn(lo, hi); });
  }
  for (auto& th : threads) th.join();
}

std::size_t near_square_rows(std::size_t count) {
  std::size_t best = 1;
  for (std::size_t r = 1; r * r <= count; ++r) {
    if (count % r == 0) best = r;
  }
  return best;
}

}  // namespace

std::vector<double> draw_source(const SourceDistribution& src, std::size_t count, unsigned jobs) {
  require(src.dims >= 1, "source distribution needs dims >= 1");
  require(!src.stratified || (src.kind == SourceKind::kUniformBox && src.dims <= 2),
          "stratified sampling is available for 1-D and 2-D uniform boxes only");
  const CounterRng rng(src.seed, src.stream);
  const std::size_t d = src.dims;
  std::vector<double> out(count * d);
  const std::size_t rows = src.dims == 2 ? near_square_rows(count) : 1;
  const std::size_t cols = rows ? count / rows : 0;
  parallel_for(count, jobs, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> u(2 * ((d + 1) / 2));
    for (std::size_t i = lo; i < hi; ++i) {
      rng.uniforms(i, u);
      double* x = out.data() + i * d;
      if (src.kind == SourceKind::kUniformBox) {
        for (std::size_t k = 0; k < d; ++k) x[k] = u[k];
        if (src.stratified && d == 1) {
          x[0] = (static_cast<double>(i) + u[0]) / static_cast<double>(count);
        } else if (src.stratified) {
          x[0] = (static_cast<double>(i / cols) + u[0]) / static_cast<double>(rows);
          x[1] = (static_cast<double>(i % cols) + u[1]) / static_cast<double>(cols);
        }
      } else {
        for (std::size_t k = 0; k < d; k += 2) {
          const double r = std::sqrt(-2.0 * std::log(u[k]));
          const double th = 2.0 * std::numbers::pi * u[k + 1];
          x[k] = r * std::cos(th);
          if (k + 1 < d) x[k + 1] = r * std::sin(th);
        }
      }
    }
  });
  return out;
}

EmpiricalDistribution sample_pushforward(const Network& net, const SourceDistribution& source,
                                         std::size_t count, unsigned jobs) {
  require(source.dims == net.input_dim(),
          "sample_pushforward: source has " + std::to_string(source.dims) +
              " dims, network expects " + std::to_string(net.input_dim()));
  const std::vector<double> x = draw_source(source, count, jobs);
  const std::size_t din = net.input_dim(), dout = net.output_dim();
  std::vector<double> y(count * dout);
  parallel_for(count, jobs, [&](std::size_t lo, std::size_t hi) {
    Evaluator ev(net);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto o = ev(std::span<const double>(x.data() + i * din, din));
      std::copy(o.begin(), o.end(), y.begin() + i * dout);
    }
  });
  return EmpiricalDistribution::uniform_weights(dout, std::move(y));
}

bool box_coupling_check(const Network& net, const SpaceFillingPlan& plan, int grid_per_box) {
  require(grid_per_box >= 1, "box_coupling_check: grid_per_box must be >= 1");
  require(static_cast<int>(net.input_dim()) == plan.n && static_cast<int>(net.output_dim()) == plan.d,
          "box_coupling_check: network does not match the plan");
  const std::uint64_t k = plan.k;
  if (k == 1) return true;
  // Input i is cut into k^{d_i} intervals; output cells are k-intervals.
  std::vector<std::uint64_t> cuts(plan.n);
  long double boxes = 1.0L;
  for (int i = 0; i < plan.n; ++i) {
    cuts[i] = 1;
    for (int j = 0; j < plan.outputs_per_input[i]; ++j) cuts[i] *= k;
    boxes *= static_cast<long double>(cuts[i]);
  }
  if (boxes > 1e8L) {
    throw Error(ErrorKind::kBudget, "box_coupling_check: too many boxes to enumerate");
  }
  const std::size_t n = plan.n, d = plan.d;
  const auto total = static_cast<std::uint64_t>(boxes);
  std::vector<char> seen(total, 0);
  Evaluator ev(net);
  std::vector<double> x(n);
  std::vector<std::uint64_t> idx(n, 0), sub(n, 0);
  std::size_t pts_per_box = 1;
  for (std::size_t i = 0; i < n; ++i) pts_per_box *= static_cast<std::size_t>(grid_per_box);
  for (std::uint64_t b = 0; b < total; ++b) {
    std::uint64_t rest = b;
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = rest % cuts[i];
      rest /= cuts[i];
    }
    std::uint64_t cell = 0;
    bool first = true;
    for (std::size_t p = 0; p < pts_per_box; ++p) {
      std::size_t r = p;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = r % grid_per_box;
        r /= grid_per_box;
        x[i] = (static_cast<double>(idx[i]) + (j + 0.5) / grid_per_box) /
               static_cast<double>(cuts[i]);
      }
      const auto y = ev(x);
      std::uint64_t c = 0;
      for (std::size_t o = 0; o < d; ++o) {
        const double scaled = std::floor(y[o] * static_cast<double>(k));
        if (!(scaled >= 0.0 && scaled < static_cast<double>(k))) return false;
        c = c * k + static_cast<std::uint64_t>(scaled);
      }
      if (first) {
        cell = c;
        first = false;
      } else if (c != cell) {
        return false;
      }
    }
    if (cell >= total || seen[cell]) return false;
    seen[cell] = 1;
  }
  return true;
}

SupErrorResult sup_error(const Network& net, const Oracle& oracle, std::span<const double> grid) {
  const std::size_t din = net.input_dim();
  require(!grid.empty() && grid.size() % din == 0, "sup_error: empty or ragged grid");
  SupErrorResult res;
  res.max_abs_error = -1.0;
  Evaluator ev(net);
  for (std::size_t i = 0; i * din < grid.size(); ++i) {
    const auto x = grid.subspan(i * din, din);
    const auto y = ev(x);
    const auto ref = oracle(x);
    require(ref.size() == y.size(), "sup_error: oracle dimension mismatch");
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double e = std::abs(y[k] - ref[k]);
      if (e > res.max_abs_error) {
        res.max_abs_error = e;
        res.argmax = i;
      }
    }
  }
  res.argmax_point.assign(grid.begin() + res.argmax * din, grid.begin() + (res.argmax + 1) * din);
  return res;
}

}  // namespace pushforge
