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


// Measurement kernels shared by the sweeps and verify.

#ifndef PUSHFORGE_LAB_INTERNAL_HPP_
#define PUSHFORGE_LAB_INTERNAL_HPP_

#include <cstdint>
#include <functional>
#include <mutex>
#include <vector>

#include "network.hpp"

namespace pushforge::lab {

// Runs fn(0..count-1) on up to `jobs` threads; results must be written by
// index so ordering does not depend on scheduling.
void parallel_indices(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

std::vector<double> uniform_grid(double a, double b, std::size_t count);

struct TentPoint {
  std::uint64_t k = 1;
  std::size_t nodes = 0, layers = 0;
  bool box_ok = false;
  double emd = 0.0, coupling_bound = 0.0, tent_upper = 0.0, tent_upper_appendix = 0.0,
         net_lower = 0.0;
};
TentPoint tent_point(int N, int L, int n, int d, int samples, std::uint64_t seed,
                     std::uint64_t stream, double fault_delta);

// Sup error against the reference CDF on the 1201-point grid of [-6, 6].
double phi_sup_error(const Network& net);
// Documented size polynomial for the CDF network: 6 (1 + ln(1/eps))^3.
double phi_node_polynomial(double eps);

struct BoxMullerPoint {
  std::size_t nodes = 0;
  double zeta = 0.0;
  double anchor_error[3] = {0, 0, 0};
  double emd = 0.0;
};
BoxMullerPoint boxmuller_point(double eps, int samples, std::uint64_t seed, std::uint64_t stream,
                               double fault_delta);

struct BerryEsseenPoint {
  double w1 = 0.0, c_fit = 0.0, mean = 0.0, variance = 0.0;
};
BerryEsseenPoint berry_esseen_point(int n, std::size_t samples, std::uint64_t seed,
                                    std::uint64_t stream, unsigned jobs, double fault_delta);

}  // namespace pushforge::lab

#endif  // PUSHFORGE_LAB_INTERNAL_HPP_
