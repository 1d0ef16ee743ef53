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
#include <limits>

#include "assembler.hpp"
#include "builders.hpp"
#include "json.hpp"

namespace pushforge {

double AccuracyCert::detail(const std::string& key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  fail_input("certificate has no detail '" + key + "'");
}

std::string cert_to_json(const AccuracyCert& cert) {
  nlohmann::ordered_json j;
  j["target_eps"] = cert.target_eps;
  j["claimed_sup_error"] = cert.claimed_sup_error;
  j["domain"] = {{"lo", cert.domain.lo}, {"hi", cert.domain.hi}};
  j["zeta"] = cert.zeta;
  nlohmann::ordered_json d = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cert.details) d[k] = v;
  j["details"] = std::move(d);
  return j.dump(1);
}

Network tent_map_net(int k) {
  require(k >= 1, "tent_map_net: k must be >= 1");
  const auto kk = static_cast<std::size_t>(k);
  AffineLayer hidden(kk, 1, Activation::kReLU);
  AffineLayer out(1, kk, Activation::kIdentity);
  for (std::size_t i = 0; i < kk; ++i) {
    hidden.w(i, 0) = k;
    hidden.bias[i] = -static_cast<double>(i);
    out.w(0, i) = i == 0 ? 1.0 : (i % 2 == 1 ? -2.0 : 2.0);
  }
  return Network({std::move(hidden), std::move(out)}, Flavor::kReluOnly);
}

SpaceFillingPlan plan_space_filling(int n, int d, int N, int L) {
  require(n >= 1 && d >= n, "space_filling_net: need d >= n >= 1");
  require(L >= 1, "space_filling_net: need L >= 1");
  if (N <= d * L) {
    fail_input("space_filling_net: insufficient carry nodes (need N > dL, got N=" +
               std::to_string(N) + ", dL=" + std::to_string(d * L) + ")");
  }
  SpaceFillingPlan p;
  p.n = n;
  p.d = d;
  p.N = N;
  p.L = L;
  p.outputs_per_input.assign(n, d / n);
  for (int i = 0; i < d % n; ++i) p.outputs_per_input[i] += 1;
  p.chain_nodes.assign(L, std::vector<int>(n, 0));
  if (d == n) return p;

  const int steps = (d - n + n - 1) / n;  // ceil((d - n) / n)
  p.run_length = L / steps;
  if (p.run_length == 0) return p;
  p.chain_width = ((N - d * L) / d) / p.run_length;
  if (p.chain_width <= 1) {
    p.chain_width = 0;
    p.run_length = 0;
    return p;
  }
  p.k = 1;
  for (int r = 0; r < p.run_length; ++r) p.k *= static_cast<std::uint64_t>(p.chain_width);
  for (int i = 0; i < n; ++i) {
    const int runs = p.outputs_per_input[i] - 1;
    for (int l = 0; l < runs * p.run_length; ++l) p.chain_nodes[l][i] = p.chain_width;
  }
  return p;
}

std::pair<Network, SpaceFillingPlan> space_filling_net(int n, int d, int N, int L) {
  SpaceFillingPlan plan = plan_space_filling(n, d, N, L);
  if (d == n) return {identity_network(n), plan};

  Assembler as(static_cast<std::size_t>(n));
  const int m = plan.chain_width;
  // finished[i] holds the outputs already produced for input i; `base` is the
  // value the active chain reads from.
  std::vector<std::vector<Assembler::Var>> finished(n);
  std::vector<Assembler::Var> base(n);
  for (int i = 0; i < n; ++i) {
    const auto x = as.input(static_cast<std::size_t>(i));
    as.set_lower(x, 0.0);
    finished[i].push_back(x);
    base[i] = x;
  }
  for (int l = 0; l < L; ++l) {
    std::vector<Assembler::Unit> units;
    std::vector<int> owner;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < plan.chain_nodes[l][i]; ++j) {
        units.push_back({{{base[i], static_cast<double>(m)}}, -static_cast<double>(j),
                         Activation::kReLU});
        owner.push_back(i);
      }
    }
    if (units.empty()) {
      // Nothing left to wire; keep the layer count by carrying everything.
      units.push_back({{}, 0.0, Activation::kReLU});
      owner.push_back(-1);
    }
    // The chain base is consumed unless it is also a finished output.
    std::vector<Assembler::Var> consumed;
    for (int i = 0; i < n; ++i) {
      if (plan.chain_nodes[l][i] > 0 &&
          std::find(finished[i].begin(), finished[i].end(), base[i]) == finished[i].end()) {
        consumed.push_back(base[i]);
      }
    }
    const auto h = as.layer(units, consumed);
    std::size_t u = 0;
    for (int i = 0; i < n; ++i) {
      if (plan.chain_nodes[l][i] == 0) continue;
      Assembler::Terms t;
      for (int j = 0; j < m; ++j, ++u) {
        t.push_back({h[u], j == 0 ? 1.0 : (j % 2 == 1 ? -2.0 : 2.0)});
      }
      const auto next = as.affine(t);
      as.set_lower(next, 0.0);
      base[i] = next;
      if ((l + 1) % plan.run_length == 0) finished[i].push_back(next);
    }
    as.release(h);
  }
  std::vector<Assembler::Var> outs;
  for (int i = 0; i < n; ++i) {
    const int di = plan.outputs_per_input[i];
    for (int j = 0; j < di; ++j) {
      outs.push_back(j < static_cast<int>(finished[i].size()) ? finished[i][j]
                                                               : finished[i].front());
    }
  }
  return {as.finish(outs), plan};
}

int multiplier_depth(double mx, double my, double eps) {
  // Error of the product is mx * my * 2^(-2m-1).
  const double need = (std::log2(mx * my / eps) - 1.0) / 2.0;
  return std::max(0, static_cast<int>(std::ceil(need)));
}

Network multiplier_net(double mx, double my, double eps) {
  require(mx > 0.0 && my > 0.0 && std::isfinite(mx) && std::isfinite(my),
          "multiplier_net: ranges must be positive");
  require(eps > 0.0 && eps < 1.0, "multiplier_net: need 0 < eps < 1");
  const int m = multiplier_depth(mx, my, eps);
  Assembler as(2);
  const auto x = as.input(0), y = as.input(1);
  const double ax = 0.5 / mx, ay = 0.5 / my;
  const auto h = as.layer({{{{x, ax}, {y, ay}}, 0.0, Activation::kReLU},
                           {{{x, -ax}, {y, -ay}}, 0.0, Activation::kReLU},
                           {{{x, ax}, {y, -ay}}, 0.0, Activation::kReLU},
                           {{{x, -ax}, {y, ay}}, 0.0, Activation::kReLU}},
                          std::vector<Assembler::Var>{x, y});
  auto u = as.affine({{h[0], 1.0}, {h[1], 1.0}});
  auto v = as.affine({{h[2], 1.0}, {h[3], 1.0}});
  as.set_lower(u, 0.0);
  as.set_lower(v, 0.0);
  as.release(h);
  // Both squarings advance in lockstep so depth stays m + 1.
  auto acc_u = as.affine({{u, 1.0}});
  auto acc_v = as.affine({{v, 1.0}});
  as.set_lower(acc_u, 0.0);
  as.set_lower(acc_v, 0.0);
  double scale = 1.0;
  for (int s = 1; s <= m; ++s) {
    const auto hh = as.layer({{{{u, 2.0}}, 0.0, Activation::kReLU},
                              {{{u, 2.0}}, -1.0, Activation::kReLU},
                              {{{v, 2.0}}, 0.0, Activation::kReLU},
                              {{{v, 2.0}}, -1.0, Activation::kReLU}},
                             std::vector<Assembler::Var>{u, v});
    u = as.affine({{hh[0], 1.0}, {hh[1], -2.0}});
    v = as.affine({{hh[2], 1.0}, {hh[3], -2.0}});
    as.set_lower(u, 0.0);
    as.set_lower(v, 0.0);
    scale *= 0.25;
    const auto nu = as.affine({{acc_u, 1.0}, {u, -scale}});
    const auto nv = as.affine({{acc_v, 1.0}, {v, -scale}});
    as.set_lower(nu, 0.0);
    as.set_lower(nv, 0.0);
    as.release(std::vector<Assembler::Var>{acc_u, acc_v});
    as.release(hh);
    acc_u = nu;
    acc_v = nv;
    if (s == m) as.release(std::vector<Assembler::Var>{u, v});
  }
  const double k = mx * my;  // xy = mx my (p^2 - q^2)
  const auto out = as.affine({{acc_u, k}, {acc_v, -k}});
  return as.finish(std::span<const Assembler::Var>(&out, 1));
}

std::pair<double, double> error_budget_split(double eps, double lipschitz_outer) {
  require(eps > 0.0 && lipschitz_outer > 0.0,
          "error_budget_split: eps and Lipschitz constant must be positive");
  return {eps / (2.0 * lipschitz_outer), eps / 2.0};
}

Network power_tower_net(int n, double M, double eps) {
  require(n >= 0, "power_tower_net: n must be >= 0");
  require(M >= 1.0 && std::isfinite(M), "power_tower_net: need M >= 1");
  require(eps > 0.0 && eps < 1.0, "power_tower_net: need 0 < eps < 1");
  Assembler as(1);
  const auto x = as.input(0);
  as.set_lower(x, -M);
  std::vector<Assembler::Var> outs{as.constant(1.0)};
  if (n >= 1) outs.push_back(x);
  auto prev = x;
  for (int k = 2; k <= n; ++k) {
    const double ek = eps / std::pow(2.0 * M, n - k);
    const auto [e_prev, e_mul] = error_budget_split(ek, M);
    const double range = std::pow(M, k - 1) + e_prev;
    const Network mul = multiplier_net(range, M, std::min(e_mul, 0.5));
    const std::vector<Assembler::Var> in{prev, x};
    const auto p = as.apply(mul, in)[0];
    as.set_lower(p, k % 2 == 0 ? -ek : -(std::pow(M, k) + ek));
    outs.push_back(p);
    prev = p;
  }
  return as.finish(outs);
}

Network clamp_net(double lo, double hi) {
  require(lo < hi, "clamp_net: need lo < hi");
  AffineLayer h(2, 1, Activation::kReLU);
  h.w(0, 0) = 1.0;
  h.bias[0] = -lo;
  h.w(1, 0) = 1.0;
  h.bias[1] = -hi;
  AffineLayer out(1, 2, Activation::kIdentity);
  out.w(0, 0) = 1.0;
  out.w(0, 1) = -1.0;
  out.bias[0] = lo;
  return Network({std::move(h), std::move(out)}, Flavor::kReluOnly);
}

Network polynomial_net(std::span<const double> c, double tol) {
  require(!c.empty(), "polynomial_net: no coefficients");
  require(tol > 0.0, "polynomial_net: tol must be positive");
  std::size_t n = c.size() - 1;
  while (n > 0 && c[n] == 0.0) --n;
  bool odd = true, even = true;
  double abs_sum = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    abs_sum += std::abs(c[j]);
    if (c[j] == 0.0) continue;
    if (j % 2 == 0) odd = odd && j == 0;
    if (j % 2 == 1) even = false;
  }
  Assembler as(1);
  const auto s = as.input(0);
  auto acc = as.constant(c[0]);
  if (n >= 1 && c[1] != 0.0) acc = as.affine({{acc, 1.0}, {s, c[1]}});
  if (n <= 1) return as.finish(std::span<const Assembler::Var>(&acc, 1));

  // Powers advance by one multiplication each, by s or by w = s^2 when the
  // series has a parity. Accumulated power error after j products is at most
  // 2 j gamma (one gamma for w, one per product).
  const bool stride2 = odd || even;
  double weight = 0.0;
  for (std::size_t j = 2; j <= n; ++j) weight += std::abs(c[j]) * static_cast<double>(j);
  const double gamma = tol / std::max(1.0, 2.0 * weight);
  const double range = 1.0 + 2.0 * static_cast<double>(n) * gamma + 1e-12;
  const Network mul = multiplier_net(range, range, std::min(gamma, 0.5));
  auto set_acc_lower = [&](Assembler::Var v) { as.set_lower(v, -abs_sum - 1.0); };
  set_acc_lower(acc);

  as.set_lower(s, -1.0);
  Assembler::Var step = s;
  if (stride2) {
    const std::vector<Assembler::Var> in{s, s};
    step = as.apply(mul, in, even ? std::span<const Assembler::Var>(&s, 1)
                                  : std::span<const Assembler::Var>())[0];
    as.set_lower(step, 0.0);
  }
  Assembler::Var p = s;
  std::size_t j = 1;
  if (stride2 && even) {
    p = step;
    j = 2;
    const auto a2 = as.affine({{acc, 1.0}, {p, c[2]}});
    set_acc_lower(a2);
    as.release(acc);
    acc = a2;
  }
  const std::size_t inc = stride2 ? 2 : 1;
  while (j + inc <= n) {
    const std::vector<Assembler::Var> in{p, step};
    // The running power is consumed, the multiplier `step` stays live (unless
    // it is the power itself, which only happens for even series at j = 2).
    std::vector<Assembler::Var> consume;
    if (p != step) consume.push_back(p);
    const auto q = as.apply(mul, in, consume);
    p = q[0];
    as.set_lower(p, -range);
    j += inc;
    const auto a2 = as.affine({{acc, 1.0}, {p, c[j]}});
    set_acc_lower(a2);
    as.release(acc);
    acc = a2;
  }
  return as.finish(std::span<const Assembler::Var>(&acc, 1));
}

Network sum_of_uniforms_net(int n) {
  require(n >= 1, "sum_of_uniforms_net: n must be >= 1");
  const double scale = 1.0 / std::sqrt(n / 12.0);
  std::vector<double> w(static_cast<std::size_t>(n), scale);
  const double b = -0.5 * n * scale;
  return affine_network(1, static_cast<std::size_t>(n), w, std::span<const double>(&b, 1));
}

}  // namespace pushforge
