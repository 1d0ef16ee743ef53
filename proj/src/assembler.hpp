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

#ifndef PUSHFORGE_ASSEMBLER_HPP_
#define PUSHFORGE_ASSEMBLER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "network.hpp"

namespace pushforge {

// Incremental builder for layered networks. A Var is an affine expression
// over the units of the most recent layer. Adding a layer re-expresses every
// live Var over the new layer, spending carry units where needed: one ReLU
// when a lower bound is known, two otherwise. Constants cost nothing.
class Assembler {
 public:
  using Var = std::size_t;
  using Terms = std::vector<std::pair<Var, double>>;

  struct Unit {
    Terms terms;
    double bias = 0.0;
    Activation act = Activation::kReLU;
  };

  explicit Assembler(std::size_t input_dim);

  Var input(std::size_t i) const;
  Var constant(double c);
  Var affine(const Terms& terms, double bias = 0.0);

  // Declares v >= lo (must hold for every input the network will see).
  void set_lower(Var v, double lo);
  std::optional<double> lower(Var v) const;

  // Appends one hidden layer. `consumed` vars are read by the new units and
  // then released before carries are allocated.
  std::vector<Var> layer(const std::vector<Unit>& units,
                         std::span<const Var> consumed = {});

  // Embeds `net` with its inputs bound to `inputs`; vars listed in `consume`
  // are released once the first layer has read them.
  std::vector<Var> apply(const Network& net, std::span<const Var> inputs,
                         std::span<const Var> consume = {});

  void release(Var v);
  void release(std::span<const Var> vs);

  std::size_t depth() const { return layers_.size(); }

  Network finish(std::span<const Var> outputs) const;

 private:
  struct Expr {
    std::vector<std::pair<std::size_t, double>> terms;  // over current frontier
    double c = 0.0;
  };
  struct Slot {
    Expr e;
    bool live = true;
    std::optional<double> lo;
  };

  Expr combine(const Terms& terms, double bias) const;
  Var add(Expr e, std::optional<double> lo);
  const Slot& slot(Var v) const;

  std::size_t input_dim_;
  std::size_t frontier_;
  std::vector<AffineLayer> layers_;
  std::vector<Slot> vars_;
  bool any_step_ = false;
};

}  // namespace pushforge

#endif  // PUSHFORGE_ASSEMBLER_HPP_
