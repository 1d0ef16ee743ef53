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

#include "assembler.hpp"

#include <algorithm>
#include <cmath>

namespace pushforge {

Assembler::Assembler(std::size_t input_dim)
    : input_dim_(input_dim), frontier_(input_dim) {
  require(input_dim > 0, "assembler needs at least one input");
  for (std::size_t i = 0; i < input_dim; ++i) {
    Expr e;
    e.terms.push_back({i, 1.0});
    add(std::move(e), std::nullopt);
  }
}

const Assembler::Slot& Assembler::slot(Var v) const {
  require(v < vars_.size() && vars_[v].live, "assembler: use of a released value");
  return vars_[v];
}

Assembler::Var Assembler::input(std::size_t i) const {
  require(i < input_dim_ && layers_.empty(), "assembler: input index out of range");
  return i;
}

Assembler::Var Assembler::add(Expr e, std::optional<double> lo) {
  vars_.push_back({std::move(e), true, lo});
  return vars_.size() - 1;
}

Assembler::Var Assembler::constant(double c) {
  Expr e;
  e.c = c;
  return add(std::move(e), c);
}

Assembler::Expr Assembler::combine(const Terms& terms, double bias) const {
  std::vector<double> dense(frontier_, 0.0);
  Expr out;
  out.c = bias;
  for (auto [v, coef] : terms) {
    const Slot& s = slot(v);
    if (coef == 0.0) continue;
    out.c += coef * s.e.c;
    for (auto [u, w] : s.e.terms) dense[u] += coef * w;
  }
  for (std::size_t u = 0; u < frontier_; ++u) {
    if (dense[u] != 0.0) out.terms.push_back({u, dense[u]});
  }
  return out;
}

Assembler::Var Assembler::affine(const Terms& terms, double bias) {
  return add(combine(terms, bias), std::nullopt);
}

void Assembler::set_lower(Var v, double lo) {
  require(v < vars_.size() && vars_[v].live, "assembler: use of a released value");
  vars_[v].lo = lo;
}

std::optional<double> Assembler::lower(Var v) const { return slot(v).lo; }

void Assembler::release(Var v) {
  require(v < vars_.size(), "assembler: unknown value");
  vars_[v].live = false;
}

void Assembler::release(std::span<const Var> vs) {
  for (Var v : vs) release(v);
}

std::vector<Assembler::Var> Assembler::layer(const std::vector<Unit>& units,
                                             std::span<const Var> consumed) {
  std::vector<Expr> pre;
  pre.reserve(units.size());
  for (const auto& u : units) {
    require(u.act != Activation::kIdentity, "assembler: identity unit in hidden layer");
    pre.push_back(combine(u.terms, u.bias));
    any_step_ |= u.act == Activation::kStep;
  }
  release(consumed);

  struct Carry {
    Var v;
    bool single;
  };
  std::vector<Carry> carries;
  for (Var v = 0; v < vars_.size(); ++v) {
    const Slot& s = vars_[v];
    if (!s.live || s.e.terms.empty()) continue;
    carries.push_back({v, s.lo.has_value()});
  }
  std::size_t rows = units.size();
  for (const auto& c : carries) rows += c.single ? 1 : 2;
  require(rows > 0, "assembler: empty layer");

  AffineLayer l(rows, frontier_, Activation::kReLU);
  auto write = [&](std::size_t r, const Expr& e, double sign, double shift) {
    for (auto [u, w] : e.terms) l.w(r, u) = sign * w;
    l.bias[r] = sign * e.c + shift;
  };
  for (std::size_t r = 0; r < units.size(); ++r) {
    write(r, pre[r], 1.0, 0.0);
    l.activations[r] = units[r].act;
  }
  std::size_t r = units.size();
  for (const auto& c : carries) {
    Slot& s = vars_[c.v];
    const Expr old = s.e;
    if (c.single) {
      write(r, old, 1.0, -*s.lo);
      s.e.terms = {{r, 1.0}};
      s.e.c = *s.lo;
      r += 1;
    } else {
      write(r, old, 1.0, 0.0);
      write(r + 1, old, -1.0, 0.0);
      s.e.terms = {{r, 1.0}, {r + 1, -1.0}};
      s.e.c = 0.0;
      r += 2;
    }
  }
  layers_.push_back(std::move(l));
  frontier_ = rows;

  std::vector<Var> out;
  out.reserve(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    Expr e;
    e.terms.push_back({u, 1.0});
    out.push_back(add(std::move(e), 0.0));
  }
  return out;
}

std::vector<Assembler::Var> Assembler::apply(const Network& net,
                                             std::span<const Var> inputs,
                                             std::span<const Var> consume) {
  require(inputs.size() == net.input_dim(), "assembler: apply arity mismatch");
  std::vector<Var> cur(inputs.begin(), inputs.end());
  const auto layers = net.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const AffineLayer& l = layers[li];
    const bool last = li + 1 == layers.size();
    if (last) {
      std::vector<Var> out;
      for (std::size_t r = 0; r < l.rows; ++r) {
        Terms t;
        for (std::size_t c = 0; c < l.cols; ++c) {
          if (l.w(r, c) != 0.0) t.push_back({cur[c], l.w(r, c)});
        }
        out.push_back(affine(t, l.bias[r]));
      }
      release(li > 0 ? std::span<const Var>(cur) : consume);
      return out;
    }
    std::vector<Unit> units(l.rows);
    for (std::size_t r = 0; r < l.rows; ++r) {
      for (std::size_t c = 0; c < l.cols; ++c) {
        if (l.w(r, c) != 0.0) units[r].terms.push_back({cur[c], l.w(r, c)});
      }
      units[r].bias = l.bias[r];
      units[r].act = l.activations[r];
    }
    const std::vector<Var> prev = cur;
    cur = layer(units, li > 0 ? std::span<const Var>(prev) : consume);
  }
  return cur;
}

Network Assembler::finish(std::span<const Var> outputs) const {
  require(!outputs.empty(), "assembler: no outputs");
  AffineLayer l(outputs.size(), frontier_, Activation::kIdentity);
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    const Slot& s = slot(outputs[r]);
    for (auto [u, w] : s.e.terms) l.w(r, u) = w;
    l.bias[r] = s.e.c;
  }
  std::vector<AffineLayer> layers = layers_;
  layers.push_back(std::move(l));
  return Network(std::move(layers), any_step_ ? Flavor::kReluStep : Flavor::kReluOnly);
}

}  // namespace pushforge
