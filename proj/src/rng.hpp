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

#ifndef PUSHFORGE_RNG_HPP_
#define PUSHFORGE_RNG_HPP_

#include <array>
#include <cstdint>
#include <span>

namespace pushforge {

// Philox4x64-10 block function (Salmon et al. counter-based generator).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;
PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key);

// Random access uniform stream: draw `index` owns the counter blocks
// (index, 0..), so any partition of indices across threads reproduces the
// same numbers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  // Fills out with uniforms in (0, 1) belonging to draw `index`.
  void uniforms(std::uint64_t index, std::span<double> out) const;
  double uniform(std::uint64_t index, std::uint32_t lane = 0) const;

  static double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  PhiloxKey key_;
};

}  // namespace pushforge

#endif  // PUSHFORGE_RNG_HPP_
