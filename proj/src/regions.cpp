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

#include "regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace pushforge {

std::vector<double> PolyhedralRegion::apply(std::span<const double> x) const {
  require(x.size() == in_dim, "region map: dimension mismatch");
  std::vector<double> y(offset);
  for (std::size_t r = 0; r < out_dim; ++r) {
    for (std::size_t c = 0; c < in_dim; ++c) y[r] += matrix[r * in_dim + c] * x[c];
  }
  return y;
}

bool PolyhedralRegion::contains(std::span<const double> x, double tol) const {
  for (const auto& h : constraints) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += h.a[j] * x[j];
    if (s > h.b + tol) return false;
  }
  return true;
}

std::size_t default_region_budget() {
  if (const char* env = std::getenv("PUSHFORGE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 2'000'000;
}

namespace {

struct Affine {
  // rows x dim matrix plus offset; value of unit r is m[r*dim..] . x + c[r].
  std::vector<double> m, c;
};

class RegionSearch {
 public:
  RegionSearch(const Network& net, const Box& box, const RegionOptions& opt)
      : net_(net), box_(box), opt_(opt), dim_(box.dim()) {
    double extent = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) extent = std::max(extent, box.hi[j] - box.lo[j]);
    min_radius_ = opt.min_relative_radius * extent;
  }

  std::vector<PolyhedralRegion> run() {
    Affine input;
    input.m.assign(dim_ * dim_, 0.0);
    input.c.assign(dim_, 0.0);
    for (std::size_t j = 0; j < dim_; ++j) input.m[j * dim_ + j] = 1.0;
    std::vector<Halfspace> cons;
    ActivationPattern pattern;
    enter_layer(0, input, cons, pattern);
    std::sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) {
      return a.interior_point < b.interior_point;
    });
    return std::move(out_);
  }

 private:
  void enter_layer(std::size_t li, const Affine& post, std::vector<Halfspace>& cons,
                   ActivationPattern& pattern) {
    const AffineLayer& layer = net_.layers()[li];
    Affine pre;
    pre.m.assign(layer.rows * dim_, 0.0);
    pre.c = layer.bias;
    for (std::size_t r = 0; r < layer.rows; ++r) {
      for (std::size_t k = 0; k < layer.cols; ++k) {
        const double w = layer.w(r, k);
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < dim_; ++j) pre.m[r * dim_ + j] += w * post.m[k * dim_ + j];
        pre.c[r] += w * post.c[k];
      }
    }
    if (li + 1 == net_.layer_count()) {
      emit(pre, cons, pattern);
      return;
    }
    Affine next;
    next.m.assign(layer.rows * dim_, 0.0);
    next.c.assign(layer.rows, 0.0);
    split_unit(li, 0, pre, next, cons, pattern);
  }

  void split_unit(std::size_t li, std::size_t r, const Affine& pre, Affine& next,
                  std::vector<Halfspace>& cons, ActivationPattern& pattern) {
    const AffineLayer& layer = net_.layers()[li];
    if (r == layer.rows) {
      enter_layer(li + 1, next, cons, pattern);
      return;
    }
    const double* a = &pre.m[r * dim_];
    const double c = pre.c[r];
    double norm = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) norm += a[j] * a[j];
    norm = std::sqrt(norm);

    auto take = [&](bool active) {
      pattern.push_back(active ? 1 : 0);
      for (std::size_t j = 0; j < dim_; ++j) {
        next.m[r * dim_ + j] =
            active && layer.activations[r] == Activation::kReLU ? a[j] : 0.0;
      }
      if (layer.activations[r] == Activation::kStep) {
        next.c[r] = active ? 1.0 : 0.0;
      } else {
        next.c[r] = active ? c : 0.0;
      }
      split_unit(li, r + 1, pre, next, cons, pattern);
      pattern.pop_back();
    };

    if (norm <= 1e-14 * (1.0 + std::abs(c))) {
      take(c > 0.0);
      return;
    }
    for (int branch = 1; branch >= 0; --branch) {
      Halfspace h;
      h.a.assign(a, a + dim_);
      h.b = -c;  // inactive: a.x + c <= 0
      if (branch == 1) {
        for (double& v : h.a) v = -v;
        h.b = c;  // active: -(a.x) <= c
      }
      cons.push_back(std::move(h));
      if (feasible(cons)) take(branch == 1);
      cons.pop_back();
    }
  }

  bool feasible(const std::vector<Halfspace>& cons) {
    if (++work_ > opt_.budget) {
      throw Error(ErrorKind::kBudget, "region budget of " + std::to_string(opt_.budget) +
                                          " LP solves exceeded");
    }
    const ChebyshevBall ball = chebyshev_center(cons, box_.lo, box_.hi);
    return ball.nonempty && ball.radius > min_radius_;
  }

  void emit(const Affine& out, const std::vector<Halfspace>& cons,
            const ActivationPattern& pattern) {
    const ChebyshevBall ball = chebyshev_center(cons, box_.lo, box_.hi);
    if (!ball.nonempty || ball.radius <= min_radius_) return;
    PolyhedralRegion reg;
    reg.constraints = cons;
    reg.in_dim = dim_;
    reg.out_dim = out.c.size();
    reg.matrix = out.m;
    reg.offset = out.c;
    reg.pattern = pattern;
    reg.interior_point = ball.center;
    reg.inradius = ball.radius;
    out_.push_back(std::move(reg));
  }

  const Network& net_;
  const Box& box_;
  const RegionOptions& opt_;
  std::size_t dim_;
  double min_radius_ = 0.0;
  std::size_t work_ = 0;
  std::vector<PolyhedralRegion> out_;
};

// Sparse copy of the weights for the 1-D sweep.
struct SparseLayer {
  std::vector<std::size_t> start;
  std::vector<std::size_t> col;
  std::vector<double> w;
};

class PieceSweep {
 public:
  explicit PieceSweep(const Network& net) : net_(net) {
    const auto layers = net.layers();
    sparse_.resize(layers.size());
    pre_v_.resize(layers.size());
    pre_s_.resize(layers.size());
    post_v_.resize(layers.size() + 1);
    post_s_.resize(layers.size() + 1);
    roots_.resize(layers.size());
    for (std::size_t li = 0; li < layers.size(); ++li) {
      const AffineLayer& l = layers[li];
      SparseLayer& s = sparse_[li];
      s.start.push_back(0);
      for (std::size_t r = 0; r < l.rows; ++r) {
        for (std::size_t c = 0; c < l.cols; ++c) {
          if (l.w(r, c) != 0.0) {
            s.col.push_back(c);
            s.w.push_back(l.w(r, c));
          }
        }
        s.start.push_back(s.col.size());
      }
      pre_v_[li].resize(l.rows);
      pre_s_[li].resize(l.rows);
      post_v_[li + 1].resize(l.rows);
      post_s_[li + 1].resize(l.rows);
    }
    pieces_.out_dim = net.output_dim();
  }

  Pieces1d run(double a, double b) {
    post_v_[0] = {a};
    post_s_[0] = {1.0};
    descend(0, a, b);
    return std::move(pieces_);
  }

 private:
  void descend(std::size_t li, double x0, double x1) {
    const AffineLayer& layer = net_.layers()[li];
    const SparseLayer& sp = sparse_[li];
    const auto& in_v = post_v_[li];
    const auto& in_s = post_s_[li];
    auto& zv = pre_v_[li];
    auto& zs = pre_s_[li];
    for (std::size_t r = 0; r < layer.rows; ++r) {
      double v = layer.bias[r], s = 0.0;
      for (std::size_t k = sp.start[r]; k < sp.start[r + 1]; ++k) {
        v += sp.w[k] * in_v[sp.col[k]];
        s += sp.w[k] * in_s[sp.col[k]];
      }
      zv[r] = v;
      zs[r] = s;
    }
    if (li + 1 == net_.layer_count()) {
      emit(x0, x1, zv, zs);
      return;
    }
    auto& roots = roots_[li];
    roots.clear();
    roots.push_back(x0);
    for (std::size_t r = 0; r < layer.rows; ++r) {
      if (zs[r] == 0.0) continue;
      const double root = x0 - zv[r] / zs[r];
      if (root > x0 && root < x1) roots.push_back(root);
    }
    roots.push_back(x1);
    std::sort(roots.begin() + 1, roots.end() - 1);
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

    auto& ov = post_v_[li + 1];
    auto& os = post_s_[li + 1];
    // descend() below reuses roots_ of deeper layers only, so iterating by
    // index over this layer's list stays valid.
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
      const double p = roots[i], q = roots[i + 1];
      const double mid = 0.5 * (p + q);
      for (std::size_t r = 0; r < layer.rows; ++r) {
        const double zmid = zv[r] + zs[r] * (mid - x0);
        const bool on = zmid > 0.0;
        if (layer.activations[r] == Activation::kStep) {
          ov[r] = on ? 1.0 : 0.0;
          os[r] = 0.0;
        } else if (on) {
          ov[r] = zv[r] + zs[r] * (p - x0);
          os[r] = zs[r];
        } else {
          ov[r] = 0.0;
          os[r] = 0.0;
        }
      }
      descend(li + 1, p, q);
    }
  }

  void emit(double x0, double x1, const std::vector<double>& v,
            const std::vector<double>& s) {
    const std::size_t d = pieces_.out_dim;
    const std::size_t n = pieces_.size();
    if (n > 0 && pieces_.x1.back() == x0) {
      bool same = true;
      for (std::size_t j = 0; j < d && same; ++j) {
        const double ps = pieces_.slope[(n - 1) * d + j];
        const double tol = 1e-9 * std::max(1.0, std::max(std::abs(ps), std::abs(s[j])));
        const double pend = pieces_.y0[(n - 1) * d + j] + ps * (x0 - pieces_.x0.back());
        const double vtol = 1e-9 * std::max(1.0, std::abs(v[j]));
        same = std::abs(ps - s[j]) <= tol && std::abs(pend - v[j]) <= vtol;
      }
      if (same) {
        pieces_.x1.back() = x1;
        return;
      }
    }
    pieces_.x0.push_back(x0);
    pieces_.x1.push_back(x1);
    pieces_.y0.insert(pieces_.y0.end(), v.begin(), v.end());
    pieces_.slope.insert(pieces_.slope.end(), s.begin(), s.end());
  }

  const Network& net_;
  std::vector<SparseLayer> sparse_;
  std::vector<std::vector<double>> pre_v_, pre_s_, post_v_, post_s_, roots_;
  Pieces1d pieces_;
};

}  // namespace

std::vector<PolyhedralRegion> enumerate_regions(const Network& net, const Box& domain,
                                                const RegionOptions& options) {
  require(domain.lo.size() == net.input_dim() && domain.hi.size() == net.input_dim(),
          "enumerate_regions: domain dimension does not match network input");
  require(net.input_dim() <= 3, "enumerate_regions supports at most 3 inputs");
  for (std::size_t j = 0; j < domain.dim(); ++j) {
    require(domain.lo[j] < domain.hi[j], "enumerate_regions: empty domain box");
  }
  RegionSearch search(net, domain, options);
  return search.run();
}

Pieces1d affine_pieces_1d(const Network& net, double a, double b) {
  require(net.input_dim() == 1, "affine_pieces_1d needs a univariate-input network");
  require(std::isfinite(a) && std::isfinite(b) && a < b, "affine_pieces_1d: need a < b");
  PieceSweep sweep(net);
  return sweep.run(a, b);
}

std::vector<double> breakpoints_1d(const Network& net, double a, double b) {
  const Pieces1d p = affine_pieces_1d(net, a, b);
  std::vector<double> out(p.x0.begin(), p.x0.end());
  out.push_back(b);
  return out;
}

}  // namespace pushforge
