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

#ifndef VIDTEX_TENSOR_H_
#define VIDTEX_TENSOR_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vidtex/error.h"

namespace vidtex {

/// Shape of a 5-dimensional tensor laid out as (batch, channels, frames,
/// height, width) in row-major order.
struct Shape {
  std::array<int64_t, 5> dims{1, 1, 1, 1, 1};

  Shape() = default;
  Shape(int64_t n, int64_t c, int64_t t, int64_t h, int64_t w)
      : dims{n, c, t, h, w} {}

  int64_t batch() const { return dims[0]; }
  int64_t channels() const { return dims[1]; }
  int64_t frames() const { return dims[2]; }
  int64_t height() const { return dims[3]; }
  int64_t width() const { return dims[4]; }
  int64_t operator[](int axis) const { return dims[axis]; }

  int64_t numel() const {
    return dims[0] * dims[1] * dims[2] * dims[3] * dims[4];
  }
  /// Elements in one (frames, height, width) volume.
  int64_t volume() const { return dims[2] * dims[3] * dims[4]; }

  bool operator==(const Shape&) const = default;
  std::string ToString() const;
};

inline Shape ScalarShape() { return Shape(1, 1, 1, 1, 1); }
inline Shape ChannelShape(int64_t c) { return Shape(1, c, 1, 1, 1); }

/// Dense owning storage for a 5-D array. Value semantics.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() : shape_(0, 0, 0, 0, 0) {}
  explicit Tensor(const Shape& shape, T fill = T(0))
      : shape_(shape), data_(CheckedNumel(shape), fill) {}
  Tensor(const Shape& shape, std::vector<T> data);

  static Tensor Zeros(const Shape& shape) { return Tensor(shape); }
  static Tensor Full(const Shape& shape, T v) { return Tensor(shape, v); }
  static Tensor Scalar(T v) { return Tensor(ScalarShape(), v); }

  const Shape& shape() const { return shape_; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  T& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  T operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  int64_t Offset(int64_t n, int64_t c, int64_t t, int64_t h, int64_t w) const {
    const auto& d = shape_.dims;
    return (((n * d[1] + c) * d[2] + t) * d[3] + h) * d[4] + w;
  }
  T& at(int64_t n, int64_t c, int64_t t, int64_t h, int64_t w) {
    return data_[static_cast<size_t>(Offset(n, c, t, h, w))];
  }
  T at(int64_t n, int64_t c, int64_t t, int64_t h, int64_t w) const {
    return data_[static_cast<size_t>(Offset(n, c, t, h, w))];
  }

  /// The single element of a 1x1x1x1x1 tensor.
  T item() const;

  bool AllFinite() const;

  template <typename U>
  Tensor<U> Cast() const {
    Tensor<U> out(shape_);
    for (size_t i = 0; i < data_.size(); ++i) {
      out[static_cast<int64_t>(i)] = static_cast<U>(data_[i]);
    }
    return out;
  }

  bool operator==(const Tensor&) const = default;

 private:
  static size_t CheckedNumel(const Shape& s);

  Shape shape_;
  std::vector<T> data_;
};

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace vidtex

#endif  // VIDTEX_TENSOR_H_
