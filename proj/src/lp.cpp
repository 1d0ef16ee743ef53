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

#include "lp.hpp"

#include <cmath>
#include <utility>

#include "errors.hpp"

namespace pushforge {
namespace {

constexpr double kPivotEps = 1e-11;

// Tableau in the usual slack form. Row m holds the objective, row m+1 the
// phase-one objective; column n is the auxiliary variable, column n+1 the
// right-hand side.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
          const std::vector<double>& c)
      : m_(b.size()), n_(c.size()), basis_(m_), nonbasis_(n_ + 1),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = A[i][j];
      basis_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  LpResult solve() {
    LpResult res;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && d_[r][n_ + 1] < -kPivotEps) {
      pivot(r, n_);
      if (!run(true) || d_[m_ + 1][n_ + 1] < -1e-9) {
        res.status = LpStatus::kInfeasible;
        return res;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (d_[i][j] < d_[i][s] || (d_[i][j] == d_[i][s] && nonbasis_[j] < nonbasis_[s])) {
            s = j;
          }
        }
        pivot(i, s);
      }
    }
    if (!run(false)) {
      res.status = LpStatus::kUnbounded;
      return res;
    }
    res.status = LpStatus::kOptimal;
    res.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) {
        res.x[basis_[i]] = d_[i][n_ + 1];
      }
    }
    res.value = d_[m_][n_ + 1];
    return res;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / d_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || d_[i][s] == 0.0) continue;
      const double f = d_[i][s] * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j) {
        if (j != s) d_[i][j] -= d_[r][j] * f;
      }
      d_[i][s] = -f;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j) {
      if (j != s) d_[r][j] *= inv;
    }
    d_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  bool run(bool phase_one) {
    const std::size_t x = phase_one ? m_ + 1 : m_;
    for (int guard = 0; guard < 100000; ++guard) {
      long s = -1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasis_[j] == -1) continue;
        if (s == -1 || d_[x][j] < d_[x][s] ||
            (d_[x][j] == d_[x][s] && nonbasis_[j] < nonbasis_[s])) {
          s = static_cast<long>(j);
        }
      }
      if (d_[x][s] > -kPivotEps) return true;
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][s] < kPivotEps) continue;
        if (r == -1) {
          r = static_cast<long>(i);
          continue;
        }
        const double lhs = d_[i][n_ + 1] / d_[i][s];
        const double rhs = d_[r][n_ + 1] / d_[r][s];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = static_cast<long>(i);
      }
      if (r == -1) return false;
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
    }
    throw Error(ErrorKind::kNumeric, "simplex did not terminate");
  }

  std::size_t m_, n_;
  std::vector<long> basis_, nonbasis_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

LpResult simplex_maximize(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b) {
  require(A.size() == b.size(), "simplex: row count mismatch");
  for (const auto& row : A) require(row.size() == c.size(), "simplex: column mismatch");
  Tableau t(A, b, c);
  return t.solve();
}

ChebyshevBall chebyshev_center(const std::vector<Halfspace>& constraints,
                               const std::vector<double>& lo,
                               const std::vector<double>& hi) {
  const std::size_t n = lo.size();
  require(hi.size() == n, "chebyshev_center: box dimension mismatch");
  // Variables y = x - lo >= 0 and the radius r >= 0.
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  A.reserve(constraints.size() + 2 * n);
  for (const auto& h : constraints) {
    require(h.a.size() == n, "chebyshev_center: constraint dimension mismatch");
    std::vector<double> row(n + 1);
    double norm = 0.0, shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = h.a[j];
      norm += h.a[j] * h.a[j];
      shift += h.a[j] * lo[j];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      if (h.b < 0.0) return {};
      continue;
    }
    // Normalizing keeps the tableau well scaled when weights span decades.
    for (std::size_t j = 0; j < n; ++j) row[j] /= norm;
    row[n] = 1.0;
    A.push_back(std::move(row));
    b.push_back((h.b - shift) / norm);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> up(n + 1, 0.0), down(n + 1, 0.0);
    up[j] = 1.0;
    up[n] = 1.0;
    A.push_back(up);
    b.push_back(hi[j] - lo[j]);
    down[j] = -1.0;
    down[n] = 1.0;
    A.push_back(down);
    b.push_back(0.0);
  }
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  const LpResult res = simplex_maximize(c, A, b);
  ChebyshevBall ball;
  if (res.status != LpStatus::kOptimal) return ball;
  ball.radius = res.x[n];
  ball.nonempty = true;
  ball.center.resize(n);
  for (std::size_t j = 0; j < n; ++j) ball.center[j] = lo[j] + res.x[j];
  return ball;
}

}  // namespace pushforge
