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

#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace pushforge {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kReLU:
      return "relu";
    case Activation::kStep:
      return "step";
    case Activation::kIdentity:
      return "identity";
  }
  return "?";
}

std::string_view to_string(Flavor f) {
  return f == Flavor::kReluOnly ? "relu_only" : "relu_step";
}

Activation activation_from_string(std::string_view s) {
  if (s == "relu") return Activation::kReLU;
  if (s == "step") return Activation::kStep;
  if (s == "identity") return Activation::kIdentity;
  throw Error(ErrorKind::kFormat, "unknown activation '" + std::string(s) + "'");
}

Flavor flavor_from_string(std::string_view s) {
  if (s == "relu_only") return Flavor::kReluOnly;
  if (s == "relu_step") return Flavor::kReluStep;
  throw Error(ErrorKind::kFormat, "unknown flavor '" + std::string(s) + "'");
}

AffineLayer::AffineLayer(std::size_t r, std::size_t c, Activation act)
    : rows(r), cols(c), weights(r * c, 0.0), bias(r, 0.0), activations(r, act) {}

bool AffineLayer::uniform_activation(Activation a) const {
  return std::all_of(activations.begin(), activations.end(),
                     [a](Activation x) { return x == a; });
}

double step(double z) { return z > 0.0 ? 1.0 : 0.0; }

namespace {

inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::kReLU:
      return z > 0.0 ? z : 0.0;
    case Activation::kStep:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kIdentity:
      return z;
  }
  return z;
}

// Dense layers built by the gadget assembler are mostly zeros; evaluation
// walks only the nonzeros.
void apply_layer(const AffineLayer& layer, std::span<const double> in,
                 std::vector<double>& out) {
  out.assign(layer.rows, 0.0);
  for (std::size_t r = 0; r < layer.rows; ++r) {
    const double* row = layer.weights.data() + r * layer.cols;
    double acc = layer.bias[r];
    for (std::size_t c = 0; c < layer.cols; ++c) {
      const double w = row[c];
      if (w != 0.0) acc += w * in[c];
    }
    out[r] = activate(layer.activations[r], acc);
  }
}

void check_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kNumeric, "non-finite value during evaluation");
    }
  }
}

}  // namespace

Network::Network(std::vector<AffineLayer> layers, Flavor flavor)
    : layers_(std::move(layers)), flavor_(flavor) {
  validate();
}

void Network::validate() const {
  require(!layers_.empty(), "network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const AffineLayer& l = layers_[i];
    require(l.rows > 0 && l.cols > 0, "layer " + std::to_string(i) + " is empty");
    require(l.weights.size() == l.rows * l.cols && l.bias.size() == l.rows &&
                l.activations.size() == l.rows,
            "layer " + std::to_string(i) + " has inconsistent sizes");
    if (i > 0) {
      require(layers_[i - 1].rows == l.cols,
              "layer " + std::to_string(i) + " input width does not chain");
    }
    for (double w : l.weights) {
      require(std::isfinite(w), "non-finite weight in layer " + std::to_string(i));
    }
    for (double b : l.bias) {
      require(std::isfinite(b), "non-finite bias in layer " + std::to_string(i));
    }
    const bool last = i + 1 == layers_.size();
    for (Activation a : l.activations) {
      if (last) {
        require(a == Activation::kIdentity, "final layer must be identity");
      } else {
        require(a != Activation::kIdentity,
                "identity activation only allowed in the final layer");
        require(a != Activation::kStep || flavor_ == Flavor::kReluStep,
                "step unit in a relu_only network");
      }
    }
  }
}

std::size_t Network::node_count() const {
  std::size_t n = input_dim();
  for (const auto& l : layers_) n += l.rows;
  return n;
}

std::size_t Network::hidden_unit_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) n += layers_[i].rows;
  return n;
}

std::size_t Network::step_unit_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) {
    n += std::count(l.activations.begin(), l.activations.end(), Activation::kStep);
  }
  return n;
}

std::vector<double> Network::eval_prefix(std::span<const double> x,
                                         std::size_t depth) const {
  require(x.size() == input_dim(),
          "input has dimension " + std::to_string(x.size()) + ", network expects " +
              std::to_string(input_dim()));
  require(depth <= layers_.size(), "prefix depth exceeds layer count");
  std::vector<double> cur(x.begin(), x.end()), next;
  for (std::size_t i = 0; i < depth; ++i) {
    apply_layer(layers_[i], cur, next);
    cur.swap(next);
  }
  check_finite(cur);
  return cur;
}

std::vector<double> Network::eval(std::span<const double> x) const {
  return eval_prefix(x, layers_.size());
}

double Network::eval1(double x) const {
  require(input_dim() == 1 && output_dim() == 1, "eval1 needs a univariate network");
  return eval(std::span<const double>(&x, 1))[0];
}

Evaluator::Evaluator(const Network& net) : net_(&net) {}

std::span<const double> Evaluator::operator()(std::span<const double> x) {
  require(x.size() == net_->input_dim(), "input dimension mismatch");
  a_.assign(x.begin(), x.end());
  for (const auto& layer : net_->layers()) {
    apply_layer(layer, a_, b_);
    a_.swap(b_);
  }
  check_finite(a_);
  return a_;
}

Network identity_network(std::size_t dim) {
  AffineLayer l(dim, dim, Activation::kIdentity);
  for (std::size_t i = 0; i < dim; ++i) l.w(i, i) = 1.0;
  return Network({std::move(l)}, Flavor::kReluOnly);
}

Network affine_network(std::size_t rows, std::size_t cols,
                       std::span<const double> weights,
                       std::span<const double> bias) {
  require(weights.size() == rows * cols && bias.size() == rows,
          "affine network dimensions disagree");
  AffineLayer l(rows, cols, Activation::kIdentity);
  std::copy(weights.begin(), weights.end(), l.weights.begin());
  std::copy(bias.begin(), bias.end(), l.bias.begin());
  return Network({std::move(l)}, Flavor::kReluOnly);
}

Network compose(const Network& outer, const Network& inner) {
  require(inner.output_dim() == outer.input_dim(),
          "compose: inner output dimension " + std::to_string(inner.output_dim()) +
              " != outer input dimension " + std::to_string(outer.input_dim()));
  std::vector<AffineLayer> layers(inner.layers().begin(), inner.layers().end() - 1);
  const AffineLayer& last = inner.layers().back();
  const AffineLayer& first = outer.layers().front();

  AffineLayer merged(first.rows, last.cols, Activation::kReLU);
  merged.activations = first.activations;
  for (std::size_t r = 0; r < first.rows; ++r) {
    double b = first.bias[r];
    for (std::size_t k = 0; k < first.cols; ++k) {
      const double fw = first.w(r, k);
      if (fw == 0.0) continue;
      b += fw * last.bias[k];
      for (std::size_t c = 0; c < last.cols; ++c) merged.w(r, c) += fw * last.w(k, c);
    }
    merged.bias[r] = b;
  }
  layers.push_back(std::move(merged));
  layers.insert(layers.end(), outer.layers().begin() + 1, outer.layers().end());
  const Flavor flavor =
      (outer.flavor() == Flavor::kReluStep || inner.flavor() == Flavor::kReluStep)
          ? Flavor::kReluStep
          : Flavor::kReluOnly;
  return Network(std::move(layers), flavor);
}

Network pad_with_carry(const Network& net, const double* lower_bound) {
  std::vector<AffineLayer> layers(net.layers().begin(), net.layers().end());
  AffineLayer last = layers.back();
  layers.pop_back();
  const std::size_t d = last.rows;
  if (lower_bound != nullptr) {
    const double lb = *lower_bound;
    AffineLayer hidden = last;
    hidden.activations.assign(d, Activation::kReLU);
    for (auto& b : hidden.bias) b -= lb;
    AffineLayer out(d, d, Activation::kIdentity);
    for (std::size_t i = 0; i < d; ++i) {
      out.w(i, i) = 1.0;
      out.bias[i] = lb;
    }
    layers.push_back(std::move(hidden));
    layers.push_back(std::move(out));
  } else {
    AffineLayer hidden(2 * d, last.cols, Activation::kReLU);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < last.cols; ++c) {
        hidden.w(i, c) = last.w(i, c);
        hidden.w(d + i, c) = -last.w(i, c);
      }
      hidden.bias[i] = last.bias[i];
      hidden.bias[d + i] = -last.bias[i];
    }
    AffineLayer out(d, 2 * d, Activation::kIdentity);
    for (std::size_t i = 0; i < d; ++i) {
      out.w(i, i) = 1.0;
      out.w(i, d + i) = -1.0;
    }
    layers.push_back(std::move(hidden));
    layers.push_back(std::move(out));
  }
  return Network(std::move(layers), net.flavor());
}

Network parallel(std::span<const Network> nets,
                 std::span<const double> output_lower_bounds) {
  require(!nets.empty(), "parallel needs at least one network");
  require(output_lower_bounds.empty() || output_lower_bounds.size() == nets.size(),
          "parallel: one lower bound per network expected");
  std::size_t depth = 0;
  for (const auto& n : nets) depth = std::max(depth, n.layer_count());

  std::vector<Network> padded;
  padded.reserve(nets.size());
  for (std::size_t i = 0; i < nets.size(); ++i) {
    Network n = nets[i];
    const double* lb = output_lower_bounds.empty() ? nullptr : &output_lower_bounds[i];
    // A one-layer (affine) net gains two layers from its first carry; after
    // that each carry adds exactly one.
    while (n.layer_count() < depth) n = pad_with_carry(n, lb);
    require(n.layer_count() == depth,
            "parallel: cannot pad an affine net to depth 2 with carry layers");
    padded.push_back(std::move(n));
  }

  std::vector<AffineLayer> layers;
  bool any_step = false;
  for (std::size_t li = 0; li < depth; ++li) {
    std::size_t rows = 0, cols = 0;
    for (const auto& n : padded) {
      rows += n.layers()[li].rows;
      cols += n.layers()[li].cols;
    }
    AffineLayer out(rows, cols, Activation::kReLU);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& n : padded) {
      const AffineLayer& l = n.layers()[li];
      for (std::size_t r = 0; r < l.rows; ++r) {
        for (std::size_t c = 0; c < l.cols; ++c) out.w(r0 + r, c0 + c) = l.w(r, c);
        out.bias[r0 + r] = l.bias[r];
        out.activations[r0 + r] = l.activations[r];
      }
      r0 += l.rows;
      c0 += l.cols;
    }
    layers.push_back(std::move(out));
  }
  for (const auto& n : padded) any_step |= n.flavor() == Flavor::kReluStep;
  return Network(std::move(layers), any_step ? Flavor::kReluStep : Flavor::kReluOnly);
}

Network replace_steps(const Network& net, double delta) {
  require(delta > 0.0 && std::isfinite(delta), "replace_steps: delta must be > 0");
  if (net.step_unit_count() == 0) {
    return Network(std::vector<AffineLayer>(net.layers().begin(), net.layers().end()),
                   Flavor::kReluOnly);
  }
  std::vector<AffineLayer> src(net.layers().begin(), net.layers().end());
  std::vector<AffineLayer> out;
  // expand[c] lists (new column, scale) pairs replacing old column c of the
  // next layer.
  std::vector<std::vector<std::pair<std::size_t, double>>> expand;
  for (std::size_t li = 0; li < src.size(); ++li) {
    const AffineLayer& l = src[li];
    // Remap input columns according to the previous layer's expansion.
    std::size_t new_cols = l.cols;
    if (!expand.empty()) {
      new_cols = 0;
      for (const auto& e : expand) new_cols += e.size();
    }
    std::size_t new_rows = 0;
    for (Activation a : l.activations) new_rows += a == Activation::kStep ? 2 : 1;

    AffineLayer nl(new_rows, new_cols, Activation::kReLU);
    std::vector<std::vector<std::pair<std::size_t, double>>> next_expand(l.rows);
    std::size_t r_out = 0;
    for (std::size_t r = 0; r < l.rows; ++r) {
      std::vector<double> row(new_cols, 0.0);
      for (std::size_t c = 0; c < l.cols; ++c) {
        const double w = l.w(r, c);
        if (w == 0.0) continue;
        if (expand.empty()) {
          row[c] += w;
        } else {
          for (auto [nc, s] : expand[c]) row[nc] += w * s;
        }
      }
      const int copies = l.activations[r] == Activation::kStep ? 2 : 1;
      for (int k = 0; k < copies; ++k) {
        std::copy(row.begin(), row.end(), nl.weights.begin() + r_out * new_cols);
        nl.bias[r_out] = l.bias[r] - (k == 1 ? delta : 0.0);
        nl.activations[r_out] =
            l.activations[r] == Activation::kStep ? Activation::kReLU : l.activations[r];
        ++r_out;
      }
      if (copies == 2) {
        next_expand[r] = {{r_out - 2, 1.0 / delta}, {r_out - 1, -1.0 / delta}};
      } else {
        next_expand[r] = {{r_out - 1, 1.0}};
      }
    }
    out.push_back(std::move(nl));
    expand = std::move(next_expand);
  }
  return Network(std::move(out), Flavor::kReluOnly);
}

std::string to_json(const Network& net) {
  nlohmann::ordered_json doc;
  doc["version"] = kNetworkFormatVersion;
  doc["flavor"] = std::string(to_string(net.flavor()));
  auto layers = nlohmann::ordered_json::array();
  for (const auto& l : net.layers()) {
    nlohmann::ordered_json jl;
    jl["rows"] = l.rows;
    jl["cols"] = l.cols;
    jl["weights"] = l.weights;
    jl["bias"] = l.bias;
    if (l.uniform_activation(l.activations.front())) {
      jl["activation"] = std::string(to_string(l.activations.front()));
    } else {
      auto acts = nlohmann::ordered_json::array();
      for (Activation a : l.activations) acts.push_back(std::string(to_string(a)));
      jl["activation"] = std::move(acts);
    }
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(1);
}

Network network_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("network file: ") + e.what());
  }
  try {
    if (!doc.contains("version") || doc["version"].get<int>() != kNetworkFormatVersion) {
      throw Error(ErrorKind::kFormat, "network file: unsupported version");
    }
    const Flavor flavor = flavor_from_string(doc.at("flavor").get<std::string>());
    std::vector<AffineLayer> layers;
    for (const auto& jl : doc.at("layers")) {
      AffineLayer l;
      l.rows = jl.at("rows").get<std::size_t>();
      l.cols = jl.at("cols").get<std::size_t>();
      l.weights = jl.at("weights").get<std::vector<double>>();
      l.bias = jl.at("bias").get<std::vector<double>>();
      const auto& act = jl.at("activation");
      if (act.is_string()) {
        l.activations.assign(l.rows, activation_from_string(act.get<std::string>()));
      } else {
        for (const auto& a : act) {
          l.activations.push_back(activation_from_string(a.get<std::string>()));
        }
      }
      layers.push_back(std::move(l));
    }
    return Network(std::move(layers), flavor);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("network file: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) throw;
    throw Error(ErrorKind::kFormat, std::string("network file: ") + e.what());
  }
}

}  // namespace pushforge
