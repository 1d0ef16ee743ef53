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
#include <functional>
#include <numbers>

#include "assembler.hpp"
#include "builders.hpp"
#include "normal.hpp"
#include "regions.hpp"

namespace pushforge {
namespace {

using Var = Assembler::Var;

// Smallest x in [lo, hi] with pred(x) true, for monotone pred.
template <class Pred>
double bisect_threshold(double lo, double hi, Pred pred) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Taylor coefficients in s of f(c + r s) truncated so the Lagrange remainder
// bound `deriv_bound * r^(n+1) / (n+1)!` stays below tail.
std::vector<double> taylor_coefficients(const std::function<double(int)>& deriv_at_c,
                                        double r, double deriv_bound, double tail) {
  std::vector<double> c;
  double term = 1.0;  // r^j / j!
  for (int j = 0; j < 400; ++j) {
    c.push_back(deriv_at_c(j) * term);
    const double next = term * r / (j + 1);
    if (deriv_bound * next <= tail) return c;
    term = next;
  }
  throw Error(ErrorKind::kNumeric, "Taylor series did not reach the requested tail");
}

Var apply1(Assembler& as, const Network& net, Var x, bool consume) {
  return as.apply(net, std::span<const Var>(&x, 1),
                  consume ? std::span<const Var>(&x, 1) : std::span<const Var>())[0];
}

// Two-ReLU clamp inside the assembler; returns the clamped var with its lower
// bound set.
Var clamp_var(Assembler& as, Var x, double lo, double hi, bool consume) {
  std::vector<Var> consumed;
  if (consume) consumed.push_back(x);
  const auto h = as.layer({{{{x, 1.0}}, -lo, Activation::kReLU},
                           {{{x, 1.0}}, -hi, Activation::kReLU}},
                          consumed);
  const auto y = as.affine({{h[0], 1.0}, {h[1], -1.0}}, lo);
  as.set_lower(y, lo);
  as.release(h);
  return y;
}

// Natural log on [a, b] (a > 0): Step-gated halving/doubling into [1/2, 3/2]
// with +-ln 2 bookkeeping, then the ln(1 + s/2) series on s = 2(v - 1).
Var ln_var(Assembler& as, Var x, double a, double b, double eps,
           std::vector<std::pair<std::string, double>>* details) {
  const int stages = std::max(0, static_cast<int>(std::ceil(std::log2(std::max(b, 1.0 / a)))));
  const double C = std::max(b, 1.5) + 1.0;
  as.set_lower(x, 0.0);
  Var v = x;
  Var acc = as.constant(0.0);
  for (int st = 0; st < stages; ++st) {
    const auto g = as.layer({{{{v, 1.0}}, -1.5, Activation::kStep},
                             {{{v, -1.0}}, 0.5, Activation::kStep}});
    const auto acc2 = as.affine({{acc, 1.0}, {g[0], std::numbers::ln2}, {g[1], -std::numbers::ln2}});
    as.set_lower(acc2, -std::numbers::ln2 * stages);
    as.release(acc);
    acc = acc2;
    // g * v/2 and g * v via big-M gates (both are nonnegative).
    const auto h = as.layer({{{{v, 0.5}, {g[0], C}}, -C, Activation::kReLU},
                             {{{v, 1.0}, {g[1], C}}, -C, Activation::kReLU}},
                            g);
    const auto v2 = as.affine({{v, 1.0}, {h[0], -1.0}, {h[1], 1.0}});
    as.set_lower(v2, 0.0);
    as.release(v);
    as.release(h);
    v = v2;
  }
  // ln(1 + s/2) = sum_{j>=1} (-1)^{j+1} s^j / (j 2^j), tail <= 2^-n / (n+1).
  std::vector<double> c{0.0};
  for (int j = 1; j < 200; ++j) {
    c.push_back((j % 2 == 1 ? 1.0 : -1.0) / (j * std::ldexp(1.0, j)));
    if (std::ldexp(1.0, -j) / (j + 1) <= eps / 2.0) break;
  }
  const Network poly = polynomial_net(c, eps / 2.0);
  const auto s = as.affine({{v, 2.0}}, -2.0);
  as.release(v);
  const auto p = apply1(as, poly, s, true);
  const auto out = as.affine({{acc, 1.0}, {p, 1.0}});
  as.release(acc);
  as.release(p);
  if (details) {
    details->push_back({"ln_stages", stages});
    details->push_back({"ln_series_order", static_cast<double>(c.size() - 1)});
  }
  return out;
}

// exp/cos/sin on [a, b] via the Taylor series about the midpoint.
Var smooth_var(Assembler& as, Var x, GadgetKind kind, double a, double b, double eps,
               std::vector<std::pair<std::string, double>>* details) {
  const double c0 = 0.5 * (a + b), r = 0.5 * (b - a);
  std::function<double(int)> deriv;
  double bound = 1.0;
  switch (kind) {
    case GadgetKind::kExp:
      deriv = [c0](int) { return std::exp(c0); };
      bound = std::exp(b);
      break;
    case GadgetKind::kCos:
      deriv = [c0](int j) { return std::cos(c0 + j * std::numbers::pi / 2.0); };
      break;
    case GadgetKind::kSin:
      deriv = [c0](int j) { return std::sin(c0 + j * std::numbers::pi / 2.0); };
      break;
    default:
      fail_input("smooth_var: unsupported kind");
  }
  std::vector<double> c = taylor_coefficients(deriv, r, bound, eps / 2.0);
  // Exact zeros keep parity detection working (cos/sin at c0 = 0).
  for (double& v : c) {
    if (std::abs(v) < 1e-300 || (kind != GadgetKind::kExp && std::abs(v) < 1e-15 * r)) v = 0.0;
  }
  const Network poly = polynomial_net(c, eps / 2.0);
  const auto s = as.affine({{x, 1.0 / r}}, -c0 / r);
  const auto out = apply1(as, poly, s, true);
  if (details) details->push_back({"series_order", static_cast<double>(c.size() - 1)});
  return out;
}

}  // namespace

GadgetKind gadget_kind_from_string(const std::string& s) {
  if (s == "exp") return GadgetKind::kExp;
  if (s == "ln") return GadgetKind::kLn;
  if (s == "cos") return GadgetKind::kCos;
  if (s == "sin") return GadgetKind::kSin;
  if (s == "pow") return GadgetKind::kPow;
  fail_input("unknown gadget kind '" + s + "' (expected exp, ln, cos, sin or pow)");
}

std::string to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::kExp:
      return "exp";
    case GadgetKind::kLn:
      return "ln";
    case GadgetKind::kCos:
      return "cos";
    case GadgetKind::kSin:
      return "sin";
    case GadgetKind::kPow:
      return "pow";
  }
  return "?";
}

Built normal_cdf_net(double eps) {
  require(eps > 0.0 && eps < 0.5, "normal_cdf_net: need 0 < eps < 1/2");
  // Beyond h the CDF is within eps/2 of its limit.
  const double h = bisect_threshold(0.0, 40.0, [&](double x) {
    return normal_cdf_ref(-x) <= eps / 2.0;
  });
  // Phi(h s) = 1/2 + sum_k (-1)^k h^(2k+1) s^(2k+1) / (sqrt(2 pi) 2^k k! (2k+1)).
  std::vector<double> c{0.5};
  double mag = h / kSqrt2Pi;  // h^(2k+1) / (sqrt(2 pi) 2^k k!)
  for (int k = 0; k < 2000; ++k) {
    c.push_back((k % 2 == 0 ? 1.0 : -1.0) * mag / (2 * k + 1));
    c.push_back(0.0);
    const double next = mag * h * h / (2.0 * (k + 1));
    const double ratio = h * h / (2.0 * (k + 2));
    // Remaining terms shrink at least geometrically by `ratio` once it is < 1.
    if (ratio < 1.0 && next / (2 * k + 3) / (1.0 - ratio) <= eps / 4.0) break;
    mag = next;
  }
  c.pop_back();
  const Network poly = polynomial_net(c, eps / 4.0);
  const double p_hi = poly.eval1(1.0), p_lo = poly.eval1(-1.0);
  const double alpha_hi = 1.0 - p_hi, alpha_lo = p_lo;

  Assembler as(1);
  const auto z = as.input(0);
  const auto u = as.layer({{{{z, 1.0}}, h, Activation::kReLU},
                           {{{z, 1.0}}, -h, Activation::kReLU},
                           {{{z, 1.0}}, -2.0 * h, Activation::kReLU},
                           {{{z, -1.0}}, -h, Activation::kReLU},
                           {{{z, -1.0}}, -2.0 * h, Activation::kReLU}},
                          std::span<const Var>(&z, 1));
  const auto s = as.affine({{u[0], 1.0 / h}, {u[1], -1.0 / h}}, -1.0);
  const auto r_hi = as.affine({{u[1], 1.0 / h}, {u[2], -1.0 / h}});
  const auto r_lo = as.affine({{u[3], 1.0 / h}, {u[4], -1.0 / h}});
  as.set_lower(r_hi, 0.0);
  as.set_lower(r_lo, 0.0);
  as.release(u);
  const auto p = apply1(as, poly, s, true);
  const auto raw = as.affine({{p, 1.0}, {r_hi, alpha_hi}, {r_lo, -alpha_lo}});
  as.release(std::vector<Var>{p, r_hi, r_lo});
  const auto out = clamp_var(as, raw, 0.0, 1.0, true);

  Built b{as.finish(std::span<const Var>(&out, 1)), {}};
  b.cert.target_eps = eps;
  b.cert.domain = {{-std::numeric_limits<double>::infinity()},
                   {std::numeric_limits<double>::infinity()}};
  b.cert.claimed_sup_error = eps;
  b.cert.details = {{"M", 2.0 * h},
                    {"series_order", static_cast<double>(c.size() - 1)},
                    {"nodes", static_cast<double>(b.net.node_count())},
                    {"layers", static_cast<double>(b.net.layer_count())}};
  return b;
}

Built binary_search_inverter(const Network& f_net, double a, double b, int t,
                             double lipschitz_inv, const InverterOptions& opt) {
  require(f_net.input_dim() == 1 && f_net.output_dim() == 1,
          "binary_search_inverter: f must be univariate");
  require(a < b, "binary_search_inverter: need a < b");
  require(t >= 1, "binary_search_inverter: need t >= 1");
  require(lipschitz_inv > 0.0, "binary_search_inverter: Lipschitz constant must be > 0");
  const double C = (b - a) + 1.0;
  Assembler as(1);
  const auto y = as.input(0);
  if (opt.y_nonnegative) as.set_lower(y, 0.0);
  Var low = as.constant(a), high = as.constant(b);
  for (int i = 0; i < t; ++i) {
    const auto mid = as.affine({{low, 0.5}, {high, 0.5}});
    const auto fm = apply1(as, f_net, mid, true);
    // g = 1 moves the bracket up: f(mid) < y.
    const auto g = as.layer({{{{y, 1.0}, {fm, -1.0}}, 0.0, Activation::kStep}},
                            std::span<const Var>(&fm, 1));
    // G = g * (high - low) / 2, exact for g in {0, 1} since the gap is in [0, b - a].
    const auto G = as.layer({{{{high, 0.5}, {low, -0.5}, {g[0], C}}, -C, Activation::kReLU}},
                            g);
    const auto low2 = as.affine({{low, 1.0}, {G[0], 1.0}});
    const auto high2 = as.affine({{low, 0.5}, {high, 0.5}, {G[0], 1.0}});
    as.set_lower(low2, a);
    as.set_lower(high2, a);
    as.release(std::vector<Var>{low, high, G[0]});
    low = low2;
    high = high2;
  }
  const auto out = as.affine({{low, 0.5}, {high, 0.5}});
  Built res{as.finish(std::span<const Var>(&out, 1)), {}};
  res.cert.target_eps = (b - a) * std::ldexp(1.0, -t) + opt.f_eps * lipschitz_inv;
  res.cert.claimed_sup_error = res.cert.target_eps;
  res.cert.domain = {{f_net.eval1(a)}, {f_net.eval1(b)}};
  res.cert.details = {{"a", a}, {"b", b}, {"t", t}, {"lipschitz_inv", lipschitz_inv},
                      {"f_eps", opt.f_eps}};
  return res;
}

InverseNormalParams inverse_normal_params(double eps) {
  require(eps > 0.0 && eps < 0.25, "inverse_normal_cdf_net: need 0 < eps < 1/4");
  InverseNormalParams p;
  p.b = std::log(1.0 / eps);
  p.a = -p.b;
  const double lip = kSqrt2Pi * std::exp(0.5 * p.b * p.b);
  p.eps_f = eps / (2.0 * lip);
  p.t = static_cast<int>(std::ceil(std::log2(2.0 * (p.b - p.a) / eps)));
  return p;
}

Built inverse_normal_cdf_net(const InverseNormalParams& p, double eps) {
  require(p.a < p.b && p.t >= 1 && p.eps_f > 0.0 && p.eps_f < 0.5,
          "inverse_normal_cdf_net: invalid parameters");
  const Built phi = normal_cdf_net(p.eps_f);
  const double lip = 1.0 / std::min(normal_pdf(p.a), normal_pdf(p.b));
  InverterOptions opt;
  opt.f_eps = p.eps_f;
  opt.y_nonnegative = true;
  Built res = binary_search_inverter(phi.net, p.a, p.b, p.t, lip, opt);
  res.cert.target_eps = eps;
  res.cert.domain = {{normal_cdf_ref(p.a)}, {normal_cdf_ref(p.b)}};
  res.cert.details.push_back({"phi_nodes", static_cast<double>(phi.net.node_count())});
  return res;
}

Built inverse_normal_cdf_net(double eps) {
  return inverse_normal_cdf_net(inverse_normal_params(eps), eps);
}

Built uniform_to_normal_net(double eps) {
  require(eps > 0.0 && eps < 0.25, "uniform_to_normal_net: need 0 < eps < 1/4");
  // Clipping N(0,1) to [-T, T] moves 2 (phi(T) - T (1 - Phi(T))) of mass-distance.
  const double T = bisect_threshold(0.0, 40.0, [&](double x) {
    return 2.0 * (normal_pdf(x) - x * normal_cdf_ref(-x)) <= eps / 4.0;
  });
  const int t = static_cast<int>(std::ceil(std::log2(2.0 * T / (eps / 4.0)) - 1.0));
  const double eps_f = eps / (16.0 * T);
  const Built phi = normal_cdf_net(eps_f);

  InverterOptions opt;
  opt.f_eps = eps_f;
  opt.y_nonnegative = true;
  const Built inv = binary_search_inverter(phi.net, -T, T, t, 1.0 / normal_pdf(T), opt);

  // Pin the tails to -T / T, then clamp.
  Assembler as(1);
  const auto u = as.input(0);
  as.set_lower(u, 0.0);
  auto x = apply1(as, inv.net, u, false);
  as.set_lower(x, -T);
  const double C = 2.0 * T + 1.0;
  const auto g = as.layer({{{{u, -1.0}}, normal_cdf_ref(-T), Activation::kStep},
                           {{{u, 1.0}}, -normal_cdf_ref(T), Activation::kStep}},
                          std::span<const Var>(&u, 1));
  const auto G = as.layer({{{{x, 1.0}, {g[0], C}}, T - C, Activation::kReLU},
                           {{{x, -1.0}, {g[1], C}}, T - C, Activation::kReLU}},
                          g);
  const auto pinned = as.affine({{x, 1.0}, {G[0], -1.0}, {G[1], 1.0}});
  as.release(x);
  as.release(G);
  const auto out = clamp_var(as, pinned, -T, T, true);
  const Network step_net = as.finish(std::span<const Var>(&out, 1));

  // Replace Steps, halving delta until the exception set is negligible. On
  // the exception set both nets stay in [-T, T], so its transport cost is at
  // most 2T times its measure; the measure is read off the exact pieces as
  // the total length where the ReLU net is not locally constant (the Step
  // net is piecewise constant).
  double delta = eps * eps * std::ldexp(1.0, -t) / static_cast<double>(step_net.node_count());
  Network relu_net;
  double zeta = 0.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    relu_net = replace_steps(step_net, delta);
    const Pieces1d pcs = affine_pieces_1d(relu_net, 0.0, 1.0);
    zeta = 0.0;
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      if (pcs.slope[i] != 0.0) zeta += pcs.x1[i] - pcs.x0[i];
    }
    if (2.0 * T * zeta < eps / 10.0) break;
    delta *= 0.5;
  }
  Built res{relu_net, {}};
  res.cert.target_eps = eps;
  res.cert.domain = Box::unit(1);
  res.cert.claimed_sup_error = eps;  // distribution-level: W(net # U, N(0,1))
  res.cert.zeta = zeta;
  res.cert.details = {{"T", T},
                      {"eps1", std::exp(-T / 2.0)},
                      {"t", t},
                      {"eps_f", eps_f},
                      {"delta", delta},
                      {"exception_cost_bound", 2.0 * T * zeta},
                      {"nodes", static_cast<double>(relu_net.node_count())},
                      {"layers", static_cast<double>(relu_net.layer_count())}};
  return res;
}

namespace {

Var pow_var(Assembler& as, Var x, double a, double b, double alpha, double eps,
            std::vector<std::pair<std::string, double>>* details) {
  if (alpha == 0.0) {
    as.release(x);
    return as.constant(1.0);
  }
  const double lip = std::max(std::pow(a, alpha), std::pow(b, alpha)) * 1.01;
  const auto [e_in, e_out] = error_budget_split(eps, lip);
  const double e_ln = std::min(e_in / std::abs(alpha), 0.5);
  const auto l = ln_var(as, x, a, b, e_ln, details);
  const auto y = as.affine({{l, alpha}});
  as.release(l);
  double lo = alpha * std::log(a), hi = alpha * std::log(b);
  if (lo > hi) std::swap(lo, hi);
  lo -= e_in;
  hi += e_in;
  return smooth_var(as, y, GadgetKind::kExp, lo, hi, std::min(e_out, 0.5), details);
}

}  // namespace

Built analytic_gadget(GadgetKind kind, double a, double b, double eps, double alpha) {
  require(a < b && std::isfinite(a) && std::isfinite(b), "analytic_gadget: need a < b");
  require(eps > 0.0 && eps < 1.0, "analytic_gadget: need 0 < eps < 1");
  if (kind == GadgetKind::kLn || kind == GadgetKind::kPow) {
    require(a > 0.0, "analytic_gadget: ln and pow need a > 0");
  }
  Assembler as(1);
  const auto x = as.input(0);
  AccuracyCert cert;
  Var out;
  switch (kind) {
    case GadgetKind::kLn:
      out = ln_var(as, x, a, b, eps, &cert.details);
      break;
    case GadgetKind::kPow:
      out = pow_var(as, x, a, b, alpha, eps, &cert.details);
      cert.details.push_back({"alpha", alpha});
      break;
    default:
      out = smooth_var(as, x, kind, a, b, eps, &cert.details);
  }
  Built res{as.finish(std::span<const Var>(&out, 1)), {}};
  cert.target_eps = eps;
  cert.claimed_sup_error = eps;
  cert.domain = {{a}, {b}};
  res.cert = std::move(cert);
  return res;
}

Built box_muller_net(double eps) {
  require(eps > 0.0 && eps < 0.25, "box_muller_net: need 0 < eps < 1/4");
  const double R = bisect_threshold(0.0, 40.0, [&](double r) {
    return kSqrt2Pi * normal_cdf_ref(-r) < eps / 10.0;
  });
  const double x_min = std::exp(-0.5 * R * R);
  const double v0 = (eps / 8.0) * (eps / 8.0);
  const double e_ln = eps * eps / 128.0;
  const double e_pow = eps / 8.0;
  const double e_trig = eps / (4.0 * R);
  const double e_mul = eps / 4.0;
  std::vector<std::pair<std::string, double>> details;

  Assembler as(2);
  const auto x1 = as.input(0), x2 = as.input(1);
  // theta = 2 pi x2 - pi, so cos(2 pi x2) = -cos(theta) and likewise for sin.
  const auto theta = as.affine({{x2, 2.0 * std::numbers::pi}}, -std::numbers::pi);
  as.set_lower(theta, -std::numbers::pi);
  const auto x1c = clamp_var(as, x1, x_min, 1.0, true);
  const auto l = ln_var(as, x1c, x_min, 1.0, e_ln, &details);
  const auto v = as.affine({{l, -2.0}});
  as.release(l);
  const auto vc = clamp_var(as, v, v0, R * R, true);
  const auto r = pow_var(as, vc, v0, R * R, 0.5, e_pow, nullptr);
  as.set_lower(r, 0.0);
  const auto c = smooth_var(as, theta, GadgetKind::kCos, -std::numbers::pi,
                            std::numbers::pi, e_trig, nullptr);
  const auto s = smooth_var(as, theta, GadgetKind::kSin, -std::numbers::pi,
                            std::numbers::pi, e_trig, nullptr);
  as.release(theta);
  const Network mul = multiplier_net(R + eps, 1.0 + e_trig, e_mul);
  const std::vector<Var> in1{r, c}, in2{r, s};
  const auto z1 = as.apply(mul, in1, std::span<const Var>(&c, 1))[0];
  const auto z2 = as.apply(mul, in2, in2)[0];
  const auto o1 = as.affine({{z1, -1.0}});
  const auto o2 = as.affine({{z2, -1.0}});
  const std::vector<Var> outs{o1, o2};
  Built res{as.finish(outs), {}};
  res.cert.target_eps = eps;
  res.cert.claimed_sup_error = eps;
  res.cert.domain = Box::unit(2);
  res.cert.zeta = x_min;
  details.insert(details.begin(), {{"R", R}, {"x1_min", x_min}, {"v0", v0}});
  details.push_back({"nodes", static_cast<double>(res.net.node_count())});
  details.push_back({"layers", static_cast<double>(res.net.layer_count())});
  res.cert.details = std::move(details);
  return res;
}

}  // namespace pushforge
