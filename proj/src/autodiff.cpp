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

#include "vidtex/autodiff.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace vidtex::ad {

namespace {

thread_local bool grad_mode_enabled = true;

void RequireSameShape(std::string_view op, const Shape& a, const Shape& b) {
  if (a != b) {
    throw DimensionError(fmt::format("{}: shape mismatch {} vs {}", op,
                                     a.ToString(), b.ToString()));
  }
}

template <typename T, typename F>
Tensor<T> Map(const Tensor<T>& a, F f) {
  Tensor<T> out(a.shape());
  const T* src = a.data();
  T* dst = out.data();
  const int64_t n = a.numel();
  for (int64_t i = 0; i < n; ++i) dst[i] = f(src[i]);
  return out;
}

template <typename T, typename F>
Tensor<T> Zip(const Tensor<T>& a, const Tensor<T>& b, F f) {
  Tensor<T> out(a.shape());
  const T* x = a.data();
  const T* y = b.data();
  T* dst = out.data();
  const int64_t n = a.numel();
  for (int64_t i = 0; i < n; ++i) dst[i] = f(x[i], y[i]);
  return out;
}

// Stride of each source axis in a tensor of shape `target`, zero where the
// target collapses that axis.
std::array<int64_t, 5> CollapsedStrides(const Shape& source, const Shape& target) {
  std::array<int64_t, 5> strides{};
  int64_t s = 1;
  for (int axis = 4; axis >= 0; --axis) {
    const int64_t td = target[axis];
    if (td != source[axis] && td != 1) {
      throw DimensionError(fmt::format("cannot reduce/broadcast between {} and {}",
                                       source.ToString(), target.ToString()));
    }
    strides[axis] = (td == 1 && source[axis] != 1) ? 0 : s;
    s *= td;
  }
  return strides;
}

// Calls f(full_offset, collapsed_offset, collapsed_w_stride, width) once per
// innermost row of `full`. The w stride is 0 (collapsed) or 1.
template <typename F>
void ForEachCollapsedRow(const Shape& full, const Shape& collapsed, F f) {
  const auto st = CollapsedStrides(full, collapsed);
  const auto& d = full.dims;
  int64_t i = 0;
  for (int64_t n = 0; n < d[0]; ++n) {
    for (int64_t c = 0; c < d[1]; ++c) {
      for (int64_t t = 0; t < d[2]; ++t) {
        for (int64_t h = 0; h < d[3]; ++h, i += d[4]) {
          f(i, n * st[0] + c * st[1] + t * st[2] + h * st[3], st[4], d[4]);
        }
      }
    }
  }
}

template <typename T>
Tensor<T> SumToKernel(const Tensor<T>& a, const Shape& target) {
  Tensor<T> out(target);
  const T* src = a.data();
  T* dst = out.data();
  ForEachCollapsedRow(a.shape(), target, [&](int64_t i, int64_t j, int64_t sw, int64_t len) {
    const T* row = src + i;
    if (sw == 0) {
      T acc = 0;
      for (int64_t w = 0; w < len; ++w) acc += row[w];
      dst[j] += acc;
    } else {
      for (int64_t w = 0; w < len; ++w) dst[j + w] += row[w];
    }
  });
  return out;
}

template <typename T>
Tensor<T> BroadcastKernel(const Tensor<T>& a, const Shape& target) {
  Tensor<T> out(target);
  const T* src = a.data();
  T* dst = out.data();
  ForEachCollapsedRow(target, a.shape(), [&](int64_t i, int64_t j, int64_t sw, int64_t len) {
    if (sw == 0) {
      std::fill(dst + i, dst + i + len, src[j]);
    } else {
      std::copy(src + j, src + j + len, dst + i);
    }
  });
  return out;
}

}  // namespace

bool GradMode::enabled() { return grad_mode_enabled; }
void GradMode::set_enabled(bool on) { grad_mode_enabled = on; }

template <typename T>
Var<T> Var<T>::Leaf(Tensor<T> value, bool requires_grad) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  node->requires_grad = requires_grad;
  return Var(std::move(node));
}

template <typename T>
const Tensor<T>& Var<T>::value() const {
  if (!node_) throw std::logic_error("value() on undefined Var");
  return node_->value;
}

template <typename T>
Tensor<T>& Var<T>::mutable_value() {
  if (!is_leaf()) throw std::logic_error("mutable_value() on a non-leaf Var");
  return node_->value;
}

template <typename T>
bool Var<T>::requires_grad() const {
  return node_ && node_->requires_grad;
}

template <typename T>
void Var<T>::set_requires_grad(bool flag) {
  if (!is_leaf()) throw std::logic_error("set_requires_grad() on a non-leaf Var");
  node_->requires_grad = flag;
}

template <typename T>
bool Var<T>::is_leaf() const {
  return node_ && !node_->backward;
}

template <typename T>
const Tensor<T>* Var<T>::grad() const {
  return (node_ && node_->grad) ? &*node_->grad : nullptr;
}

template <typename T>
void Var<T>::zero_grad() {
  if (node_) node_->grad.reset();
}

template <typename T>
Var<T> MakeOp(Tensor<T> value, std::string_view op, std::vector<Var<T>> inputs,
              BackwardFn<T> backward) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  node->op = op;
  bool track = false;
  if (GradMode::enabled()) {
    for (const auto& in : inputs) track = track || in.requires_grad();
  }
  if (track) {
    node->requires_grad = true;
    node->inputs = std::move(inputs);
    node->backward = std::move(backward);
  }
  return Var<T>(std::move(node));
}

namespace {

// Post-order (inputs first) over nodes that require gradients.
template <typename T>
std::vector<std::shared_ptr<Node<T>>> TopoOrder(const Var<T>& root) {
  std::vector<std::shared_ptr<Node<T>>> order;
  if (!root.requires_grad()) return order;
  std::unordered_set<Node<T>*> seen;
  std::vector<std::pair<std::shared_ptr<Node<T>>, size_t>> stack;
  stack.emplace_back(root.shared(), 0);
  seen.insert(root.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      const auto& child = node->inputs[next++].shared();
      if (child && child->requires_grad && seen.insert(child.get()).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}

template <typename T>
std::unordered_map<Node<T>*, Var<T>> Propagate(
    const Var<T>& output, const std::vector<std::shared_ptr<Node<T>>>& order,
    const std::unordered_set<Node<T>*>& targets, bool create_graph) {
  std::unordered_map<Node<T>*, bool> needed;
  for (const auto& node : order) {
    bool need = targets.count(node.get()) > 0;
    for (const auto& in : node->inputs) {
      if (in.defined() && in.requires_grad() && needed[in.node()]) need = true;
    }
    needed[node.get()] = need;
  }

  std::unordered_map<Node<T>*, Var<T>> grads;
  std::unordered_map<Node<T>*, Var<T>> result;
  bool prev_mode = GradMode::enabled();
  GradMode::set_enabled(create_graph);
  try {
    grads[output.node()] = Var<T>::Leaf(Tensor<T>::Full(output.shape(), T(1)));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto& node = *it;
      auto found = grads.find(node.get());
      if (found == grads.end()) continue;
      Var<T> gout = std::move(found->second);
      grads.erase(found);
      if (targets.count(node.get())) result[node.get()] = gout;
      if (!node->backward || !needed[node.get()]) continue;

      std::vector<bool> needs(node->inputs.size(), false);
      for (size_t i = 0; i < needs.size(); ++i) {
        const auto& in = node->inputs[i];
        needs[i] = in.defined() && in.requires_grad() && needed[in.node()];
      }
      std::vector<Var<T>> in_grads = node->backward(Var<T>(node), gout, needs);
      for (size_t i = 0; i < needs.size(); ++i) {
        if (!needs[i] || !in_grads[i].defined()) continue;
        Node<T>* key = node->inputs[i].node();
        if (in_grads[i].shape() != node->inputs[i].shape()) {
          throw std::logic_error(fmt::format("{}: backward produced gradient of shape {} for input of shape {}",
                                             node->op, in_grads[i].shape().ToString(),
                                             node->inputs[i].shape().ToString()));
        }
        auto slot = grads.find(key);
        if (slot == grads.end()) {
          grads.emplace(key, std::move(in_grads[i]));
        } else {
          slot->second = Add(slot->second, in_grads[i]);
        }
      }
    }
  } catch (...) {
    GradMode::set_enabled(prev_mode);
    throw;
  }
  GradMode::set_enabled(prev_mode);
  return result;
}

}  // namespace

template <typename T>
std::vector<Var<T>> Grad(const Var<T>& output, const std::vector<Var<T>>& inputs,
                         bool create_graph) {
  const auto order = TopoOrder(output);
  std::unordered_set<Node<T>*> targets;
  for (const auto& in : inputs) targets.insert(in.node());
  auto result = Propagate(output, order, targets, create_graph);
  std::vector<Var<T>> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    auto it = result.find(in.node());
    if (it != result.end()) {
      out.push_back(it->second);
    } else {
      out.push_back(Var<T>::Leaf(Tensor<T>::Zeros(in.shape())));
    }
  }
  return out;
}

template <typename T>
void Backward(const Var<T>& loss) {
  if (loss.value().numel() != 1) {
    throw DimensionError("Backward() needs a single-element loss, got shape " +
                         loss.shape().ToString());
  }
  const auto order = TopoOrder(loss);
  std::unordered_set<Node<T>*> targets;
  for (const auto& node : order) {
    if (!node->backward) targets.insert(node.get());
  }
  auto result = Propagate(loss, order, targets, false);
  for (auto& [node, g] : result) {
    const Tensor<T>& gv = g.value();
    if (!node->grad) {
      node->grad = gv;
    } else {
      T* dst = node->grad->data();
      const T* src = gv.data();
      for (int64_t i = 0; i < gv.numel(); ++i) dst[i] += src[i];
    }
  }
}

template <typename T>
Var<T> Add(const Var<T>& a, const Var<T>& b) {
  RequireSameShape("Add", a.shape(), b.shape());
  return MakeOp<T>(Zip(a.value(), b.value(), [](T x, T y) { return x + y; }), "Add", {a, b},
                   [](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{g, g};
                   });
}

template <typename T>
Var<T> Sub(const Var<T>& a, const Var<T>& b) {
  RequireSameShape("Sub", a.shape(), b.shape());
  return MakeOp<T>(Zip(a.value(), b.value(), [](T x, T y) { return x - y; }), "Sub", {a, b},
                   [](const Var<T>&, const Var<T>& g, const std::vector<bool>& needs) {
                     return std::vector<Var<T>>{g, needs[1] ? Scale(g, T(-1)) : Var<T>()};
                   });
}

template <typename T>
Var<T> Mul(const Var<T>& a, const Var<T>& b) {
  RequireSameShape("Mul", a.shape(), b.shape());
  return MakeOp<T>(Zip(a.value(), b.value(), [](T x, T y) { return x * y; }), "Mul", {a, b},
                   [](const Var<T>& out, const Var<T>& g, const std::vector<bool>& needs) {
                     const auto& in = out.node()->inputs;
                     return std::vector<Var<T>>{needs[0] ? Mul(g, in[1]) : Var<T>(),
                                                needs[1] ? Mul(g, in[0]) : Var<T>()};
                   });
}

template <typename T>
Var<T> Scale(const Var<T>& a, T factor) {
  return MakeOp<T>(Map(a.value(), [factor](T x) { return x * factor; }), "Scale", {a},
                   [factor](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{Scale(g, factor)};
                   });
}

template <typename T>
Var<T> AddScalar(const Var<T>& a, T offset) {
  return MakeOp<T>(Map(a.value(), [offset](T x) { return x + offset; }), "AddScalar", {a},
                   [](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{g};
                   });
}

template <typename T>
Var<T> PowScalar(const Var<T>& a, T exponent) {
  return MakeOp<T>(Map(a.value(), [exponent](T x) { return std::pow(x, exponent); }),
                   "PowScalar", {a},
                   [exponent](const Var<T>& out, const Var<T>& g, const std::vector<bool>&) {
                     const auto& x = out.node()->inputs[0];
                     return std::vector<Var<T>>{
                         Mul(g, Scale(PowScalar(x, exponent - T(1)), exponent))};
                   });
}

template <typename T>
Var<T> Sqrt(const Var<T>& a) {
  return MakeOp<T>(Map(a.value(), [](T x) { return std::sqrt(x); }), "Sqrt", {a},
                   [](const Var<T>& out, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{Mul(g, Scale(SafeReciprocal(out), T(0.5)))};
                   });
}

template <typename T>
Var<T> SafeReciprocal(const Var<T>& a) {
  return MakeOp<T>(Map(a.value(), [](T x) { return x == T(0) ? T(0) : T(1) / x; }), "SafeReciprocal", {a},
                   [](const Var<T>& out, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{Mul(g, Scale(Mul(out, out), T(-1)))};
                   });
}

template <typename T>
Var<T> Tanh(const Var<T>& a) {
  return MakeOp<T>(Map(a.value(), [](T x) { return std::tanh(x); }), "Tanh", {a},
                   [](const Var<T>& out, const Var<T>& g, const std::vector<bool>&) {
                     // d tanh = 1 - tanh^2, expressed through the output node.
                     return std::vector<Var<T>>{Mul(g, AddScalar(Scale(Mul(out, out), T(-1)), T(1)))};
                   });
}

template <typename T>
Var<T> LeakyRelu(const Var<T>& a, T slope) {
  if (!(slope > T(0) && slope < T(1))) {
    throw std::invalid_argument(fmt::format("leaky_relu slope must be in (0,1), got {}", slope));
  }
  return MakeOp<T>(Map(a.value(), [slope](T x) { return std::max(x, x * slope); }),
                   "LeakyRelu", {a},
                   [slope](const Var<T>& out, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{LeakyReluMask(g, out.node()->inputs[0], slope)};
                   });
}

template <typename T>
Var<T> LeakyReluMask(const Var<T>& grad, const Var<T>& ref, T slope) {
  RequireSameShape("LeakyReluMask", grad.shape(), ref.shape());
  Tensor<T> v = Zip(grad.value(), ref.value(),
                    [slope](T g, T r) { return g * (r > T(0) ? T(1) : slope); });
  // The mask is piecewise constant in `ref`, so only `grad` receives a gradient.
  return MakeOp<T>(std::move(v), "LeakyReluMask", {grad},
                   [ref, slope](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{LeakyReluMask(g, ref.detach(), slope)};
                   });
}

template <typename T>
Var<T> SumTo(const Var<T>& a, const Shape& target) {
  if (a.shape() == target) return a;
  Shape source = a.shape();
  return MakeOp<T>(SumToKernel(a.value(), target), "SumTo", {a},
                   [source](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{BroadcastTo(g, source)};
                   });
}

template <typename T>
Var<T> BroadcastTo(const Var<T>& a, const Shape& target) {
  if (a.shape() == target) return a;
  Shape source = a.shape();
  return MakeOp<T>(BroadcastKernel(a.value(), target), "BroadcastTo", {a},
                   [source](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{SumTo(g, source)};
                   });
}

template <typename T>
Var<T> SumAll(const Var<T>& a) {
  return SumTo(a, ScalarShape());
}

template <typename T>
Var<T> MeanAll(const Var<T>& a) {
  return Scale(SumAll(a), T(1) / static_cast<T>(a.value().numel()));
}

#define VIDTEX_INSTANTIATE_AUTODIFF(T)                                                     \
  template class Var<T>;                                                                   \
  template Var<T> MakeOp<T>(Tensor<T>, std::string_view, std::vector<Var<T>>, BackwardFn<T>); \
  template std::vector<Var<T>> Grad<T>(const Var<T>&, const std::vector<Var<T>>&, bool);   \
  template void Backward<T>(const Var<T>&);                                                \
  template Var<T> Add<T>(const Var<T>&, const Var<T>&);                                    \
  template Var<T> Sub<T>(const Var<T>&, const Var<T>&);                                    \
  template Var<T> Mul<T>(const Var<T>&, const Var<T>&);                                    \
  template Var<T> Scale<T>(const Var<T>&, T);                                              \
  template Var<T> AddScalar<T>(const Var<T>&, T);                                          \
  template Var<T> PowScalar<T>(const Var<T>&, T);                                          \
  template Var<T> Sqrt<T>(const Var<T>&);                                                  \
  template Var<T> SafeReciprocal<T>(const Var<T>&);                                        \
  template Var<T> Tanh<T>(const Var<T>&);                                                  \
  template Var<T> LeakyRelu<T>(const Var<T>&, T);                                          \
  template Var<T> LeakyReluMask<T>(const Var<T>&, const Var<T>&, T);                       \
  template Var<T> SumTo<T>(const Var<T>&, const Shape&);                                   \
  template Var<T> BroadcastTo<T>(const Var<T>&, const Shape&);                             \
  template Var<T> SumAll<T>(const Var<T>&);                                                \
  template Var<T> MeanAll<T>(const Var<T>&);

VIDTEX_INSTANTIATE_AUTODIFF(float)
VIDTEX_INSTANTIATE_AUTODIFF(double)

#undef VIDTEX_INSTANTIATE_AUTODIFF

}  // namespace vidtex::ad
