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

#include "vidtex/tensor.h"

#include <cmath>

#include <fmt/format.h>

namespace vidtex {

std::string Shape::ToString() const {
  return fmt::format("{}x{}x{}x{}x{}", dims[0], dims[1], dims[2], dims[3],
                     dims[4]);
}

template <typename T>
size_t Tensor<T>::CheckedNumel(const Shape& s) {
  for (int64_t d : s.dims) {
    if (d < 0) throw DimensionError("negative dimension in shape " + s.ToString());
  }
  return static_cast<size_t>(s.numel());
}

template <typename T>
Tensor<T>::Tensor(const Shape& shape, std::vector<T> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != CheckedNumel(shape)) {
    throw DimensionError(fmt::format("tensor data has {} values, shape {} needs {}",
                                     data_.size(), shape.ToString(), shape.numel()));
  }
}

template <typename T>
T Tensor<T>::item() const {
  if (data_.size() != 1) {
    throw DimensionError("item() on tensor of shape " + shape_.ToString());
  }
  return data_[0];
}

template <typename T>
bool Tensor<T>::AllFinite() const {
  for (T v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace vidtex
