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

#ifndef PUSHFORGE_BUILDERS_HPP_
#define PUSHFORGE_BUILDERS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "network.hpp"
#include "regions.hpp"

namespace pushforge {

struct AccuracyCert {
  double target_eps = 0.0;
  Box domain;
  double claimed_sup_error = 0.0;
  double zeta = 0.0;  // measure of the excluded input set
  // Construction parameters worth reporting (truncation order, t, delta...).
  std::vector<std::pair<std::string, double>> details;

  double detail(const std::string& key) const;
};

struct Built {
  Network net;
  AccuracyCert cert;
};

std::string cert_to_json(const AccuracyCert& cert);

// --- tent maps and space filling -------------------------------------------

// t_k(x) = relu(kx) + sum_{i=1}^{k-1} 2(-1)^i relu(kx - i), exact on [0, 1].
Network tent_map_net(int k);

struct SpaceFillingPlan {
  int n = 0, d = 0, N = 0, L = 0;
  std::vector<int> outputs_per_input;  // d_i
  int run_length = 0;                  // hidden layers per frequency step
  int chain_width = 0;                 // tent pieces per chain layer (m)
  // n_{l,i}: chain units wired in hidden layer l for input i.
  std::vector<std::vector<int>> chain_nodes;
  std::uint64_t k = 1;  // product of piece counts along one run

  int carry_nodes() const { return d * L; }
};

// Reads N as the hidden-node budget and L as the hidden-layer count; the
// emitted network has L+1 affine maps. Output order is (t_1(x_1), t_k(x_1),
// ..., t_{k^{d_1-1}}(x_1), t_1(x_2), ...).
SpaceFillingPlan plan_space_filling(int n, int d, int N, int L);
std::pair<Network, SpaceFillingPlan> space_filling_net(int n, int d, int N, int L);

// --- arithmetic gadgets ------------------------------------------------------

// (x, y) -> xy on [-mx, mx] x [-my, my] within eps, by polarization over the
// sawtooth approximation of squaring.
Network multiplier_net(double mx, double my, double eps);
inline Network multiplier_net(double M, double eps) { return multiplier_net(M, M, eps); }
int multiplier_depth(double mx, double my, double eps);
// Documented size constant: N <= kMultiplierSizeConstant * (1 + ln(1/eps) + ln M).
inline constexpr double kMultiplierSizeConstant = 20.0;

// (eps_inner, eps_outer) = (eps / (2 L), eps / 2).
std::pair<double, double> error_budget_split(double eps, double lipschitz_outer);

// Outputs x^0 .. x^n on [-M, M], each within eps.
Network power_tower_net(int n, double M, double eps);

// max(lo, min(x, hi)) with two ReLUs.
Network clamp_net(double lo, double hi);

// P(s) = sum_j c[j] s^j on [-1, 1] within tol of the exact polynomial.
Network polynomial_net(std::span<const double> c, double tol);

// --- distribution gadgets ----------------------------------------------------

Built normal_cdf_net(double eps);

struct InverterOptions {
  double f_eps = 0.0;       // sup error of f_net against the inverted function
  bool y_nonnegative = false;  // lets the input be carried with one ReLU
};

// Binary search for f^{-1}(y) over [a, b] in t stages; output is the final
// midpoint. Flavor relu_step.
Built binary_search_inverter(const Network& f_net, double a, double b, int t,
                             double lipschitz_inv, const InverterOptions& opt = {});

struct InverseNormalParams {
  double a = 0.0, b = 0.0;
  int t = 0;
  double eps_f = 0.0;
};
InverseNormalParams inverse_normal_params(double eps);
Built inverse_normal_cdf_net(double eps);
Built inverse_normal_cdf_net(const InverseNormalParams& p, double eps);

Built uniform_to_normal_net(double eps);

enum class GadgetKind { kExp, kLn, kCos, kSin, kPow };
GadgetKind gadget_kind_from_string(const std::string& s);
std::string to_string(GadgetKind k);

Built analytic_gadget(GadgetKind kind, double a, double b, double eps, double alpha = 0.0);

Built box_muller_net(double eps);

// x -> (sum x_i - n/2) / sqrt(n/12), a single affine map.
Network sum_of_uniforms_net(int n);

}  // namespace pushforge

#endif  // PUSHFORGE_BUILDERS_HPP_
