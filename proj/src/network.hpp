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

#ifndef PUSHFORGE_NETWORK_HPP_
#define PUSHFORGE_NETWORK_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace pushforge {

enum class Activation { kReLU, kStep, kIdentity };

enum class Flavor { kReluOnly, kReluStep };

std::string_view to_string(Activation a);
std::string_view to_string(Flavor f);
Activation activation_from_string(std::string_view s);
Flavor flavor_from_string(std::string_view s);

// One affine map followed by a per-unit activation. Hidden layers may mix
// ReLU and Step units (a binary-search stage carries values through ReLUs
// while its comparison units are Steps); the final layer is all Identity.
struct AffineLayer {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;  // row-major, rows x cols
  std::vector<double> bias;     // rows
  std::vector<Activation> activations;  // rows

  AffineLayer() = default;
  AffineLayer(std::size_t rows, std::size_t cols, Activation act);

  double& w(std::size_t r, std::size_t c) { return weights[r * cols + c]; }
  double w(std::size_t r, std::size_t c) const { return weights[r * cols + c]; }

  bool uniform_activation(Activation a) const;
};

// A feedforward network A_L o act o ... o act o A_1. Immutable once built;
// every operation below returns a fresh value.
class Network {
 public:
  Network() = default;
  Network(std::vector<AffineLayer> layers, Flavor flavor);

  std::size_t input_dim() const { return layers_.front().cols; }
  std::size_t output_dim() const { return layers_.back().rows; }
  std::size_t layer_count() const { return layers_.size(); }
  Flavor flavor() const { return flavor_; }
  std::span<const AffineLayer> layers() const { return layers_; }

  // N = sum of widths over all layers including input and output.
  std::size_t node_count() const;
  std::size_t hidden_unit_count() const;
  std::size_t step_unit_count() const;

  std::vector<double> eval(std::span<const double> x) const;
  double eval1(double x) const;

  // Evaluates only the first `depth` layers and returns the post-activation
  // values of layer depth-1 (or x itself for depth 0).
  std::vector<double> eval_prefix(std::span<const double> x,
                                  std::size_t depth) const;

 private:
  void validate() const;

  std::vector<AffineLayer> layers_;
  Flavor flavor_ = Flavor::kReluOnly;
};

// Scratch-buffer evaluator for hot loops (sampling, grids). Not thread-safe;
// use one per thread.
class Evaluator {
 public:
  explicit Evaluator(const Network& net);
  std::span<const double> operator()(std::span<const double> x);

 private:
  const Network* net_;
  std::vector<double> a_, b_;
};

double step(double z);

Network identity_network(std::size_t dim);
Network affine_network(std::size_t rows, std::size_t cols,
                       std::span<const double> weights,
                       std::span<const double> bias);

// eval(result, x) == eval(outer, eval(inner, x)); the seam's two affine maps
// are merged into one layer.
Network compose(const Network& outer, const Network& inner);

// Block-diagonal stacking. Shorter nets are padded with carry layers at the
// end. With a lower bound lb for a net's outputs a carry is the single unit
// relu(v - lb) + lb; without one it is relu(v) - relu(-v).
Network parallel(std::span<const Network> nets,
                 std::span<const double> output_lower_bounds = {});

// Appends one carry layer (see parallel).
Network pad_with_carry(const Network& net, const double* lower_bound);

// Replaces every Step unit by s_delta(z) = (relu(z) - relu(z - delta)) / delta.
Network replace_steps(const Network& net, double delta);

// Versioned JSON document: {version, flavor, layers:[{rows, cols, weights,
// bias, activation}]}; activation is a string when uniform across the layer
// and an array otherwise.
inline constexpr int kNetworkFormatVersion = 1;
std::string to_json(const Network& net);
Network network_from_json(std::string_view text);

}  // namespace pushforge

#endif  // PUSHFORGE_NETWORK_HPP_
