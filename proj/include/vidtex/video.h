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

#ifndef VIDTEX_VIDEO_H_
#define VIDTEX_VIDEO_H_

#include <cstdint>

#include "vidtex/tensor.h"

namespace vidtex {

/// An RGB video of shape 3 x T x H x W, stored as a (1, 3, T, H, W) tensor.
/// Values are nominally in [-1, 1]; see InRange().
class VideoClip {
 public:
  static constexpr int64_t kChannels = 3;

  VideoClip() : tensor_(Shape(1, kChannels, 0, 0, 0)) {}
  VideoClip(int64_t frames, int64_t height, int64_t width, float fill = 0.0f)
      : tensor_(Shape(1, kChannels, frames, height, width), fill) {}
  /// Adopts a tensor; throws DimensionError unless it is (1, 3, T, H, W).
  explicit VideoClip(Tensor<float> tensor);

  int64_t frames() const { return tensor_.shape().frames(); }
  int64_t height() const { return tensor_.shape().height(); }
  int64_t width() const { return tensor_.shape().width(); }
  const Shape& shape() const { return tensor_.shape(); }

  float& at(int64_t c, int64_t t, int64_t h, int64_t w) { return tensor_.at(0, c, t, h, w); }
  float at(int64_t c, int64_t t, int64_t h, int64_t w) const { return tensor_.at(0, c, t, h, w); }

  const Tensor<float>& tensor() const { return tensor_; }
  Tensor<float>& tensor() { return tensor_; }

  /// Frames [start, start + count).
  VideoClip Slice(int64_t start, int64_t count) const;
  /// Copy with every value clamped to [-1, 1].
  VideoClip Clamped() const;
  bool InRange() const;

  bool operator==(const VideoClip&) const = default;

 private:
  Tensor<float> tensor_;
};

}  // namespace vidtex

#endif  // VIDTEX_VIDEO_H_
