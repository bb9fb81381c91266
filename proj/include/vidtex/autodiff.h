// Copyright 2026 The vidtex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reverse-mode differentiation over 5-D tensors.
//
// A Var is a handle to a graph node. Ops record a node whenever grad mode is
// on and at least one input requires a gradient. Every backward rule is
// itself written with recorded ops, so gradients taken with
// `create_graph = true` can be differentiated again.

#ifndef VIDTEX_AUTODIFF_H_
#define VIDTEX_AUTODIFF_H_

#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "vidtex/tensor.h"

namespace vidtex::ad {

template <typename T>
struct Node;

template <typename T>
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

  static Var Leaf(Tensor<T> value, bool requires_grad = false);
  static Var Constant(Tensor<T> value) { return Leaf(std::move(value), false); }

  bool defined() const { return node_ != nullptr; }
  const Tensor<T>& value() const;
  /// Mutable access for leaves (parameter updates). Throws on interior nodes.
  Tensor<T>& mutable_value();
  const Shape& shape() const { return value().shape(); }

  bool requires_grad() const;
  void set_requires_grad(bool flag);
  bool is_leaf() const;

  /// Accumulated gradient from Backward(); nullptr when none has been written.
  const Tensor<T>* grad() const;
  void zero_grad();

  /// Same value, cut from the graph.
  Var detach() const { return Leaf(value(), false); }

  Node<T>* node() const { return node_.get(); }
  const std::shared_ptr<Node<T>>& shared() const { return node_; }

 private:
  std::shared_ptr<Node<T>> node_;
};

/// Computes input gradients given the node's output and the gradient flowing
/// into it. `needs[i]` says whether input i wants a gradient; entries for
/// inputs that do not may be left undefined.
template <typename T>
using BackwardFn = std::function<std::vector<Var<T>>(
    const Var<T>& out, const Var<T>& grad_out, const std::vector<bool>& needs)>;

template <typename T>
struct Node {
  Tensor<T> value;
  std::optional<Tensor<T>> grad;
  bool requires_grad = false;
  std::vector<Var<T>> inputs;
  BackwardFn<T> backward;
  std::string_view op = "leaf";
};

/// Thread-local switch controlling whether ops record graph nodes.
class GradMode {
 public:
  static bool enabled();
  static void set_enabled(bool on);
};

class NoGradGuard {
 public:
  NoGradGuard() : prev_(GradMode::enabled()) { GradMode::set_enabled(false); }
  ~NoGradGuard() { GradMode::set_enabled(prev_); }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

/// Builds the output Var of an op, attaching `backward` only when recording.
template <typename T>
Var<T> MakeOp(Tensor<T> value, std::string_view op, std::vector<Var<T>> inputs,
              BackwardFn<T> backward);

/// Gradients of `output` (seeded with ones) with respect to `inputs`.
/// Unreachable inputs receive zeros. With `create_graph` the returned Vars
/// are themselves differentiable.
template <typename T>
std::vector<Var<T>> Grad(const Var<T>& output, const std::vector<Var<T>>& inputs,
                         bool create_graph = false);

/// Accumulates d(loss)/d(leaf) into the grad slot of every reachable leaf
/// that requires a gradient. `loss` must hold a single element.
template <typename T>
void Backward(const Var<T>& loss);

// Elementwise ops. Binary ops require identical shapes.
template <typename T> Var<T> Add(const Var<T>& a, const Var<T>& b);
template <typename T> Var<T> Sub(const Var<T>& a, const Var<T>& b);
template <typename T> Var<T> Mul(const Var<T>& a, const Var<T>& b);
template <typename T> Var<T> Scale(const Var<T>& a, T factor);
template <typename T> Var<T> AddScalar(const Var<T>& a, T offset);
template <typename T> Var<T> PowScalar(const Var<T>& a, T exponent);
/// Derivative at 0 is taken as 0 rather than infinity.
template <typename T> Var<T> Sqrt(const Var<T>& a);
/// 1 / a, with 0 mapped to 0.
template <typename T> Var<T> SafeReciprocal(const Var<T>& a);
template <typename T> Var<T> Tanh(const Var<T>& a);
template <typename T> Var<T> LeakyRelu(const Var<T>& a, T slope);
/// grad * (ref > 0 ? 1 : slope); the derivative of LeakyRelu, linear in grad.
template <typename T> Var<T> LeakyReluMask(const Var<T>& grad, const Var<T>& ref, T slope);

// Reductions and broadcasts. A target shape must agree with the source on
// every axis except those where it is 1.
template <typename T> Var<T> SumTo(const Var<T>& a, const Shape& target);
template <typename T> Var<T> BroadcastTo(const Var<T>& a, const Shape& target);
template <typename T> Var<T> SumAll(const Var<T>& a);
template <typename T> Var<T> MeanAll(const Var<T>& a);

template <typename T> Var<T> Square(const Var<T>& a) { return Mul(a, a); }

}  // namespace vidtex::ad

#endif  // VIDTEX_AUTODIFF_H_
