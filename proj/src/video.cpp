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

#include "vidtex/video.h"

#include <algorithm>
#include <cstring>

#include <fmt/format.h>

namespace vidtex {

VideoClip::VideoClip(Tensor<float> tensor) : tensor_(std::move(tensor)) {
  const Shape& s = tensor_.shape();
  if (s.batch() != 1 || s.channels() != kChannels) {
    throw DimensionError("video clip must have shape 1x3xTxHxW, got " + s.ToString());
  }
}

VideoClip VideoClip::Slice(int64_t start, int64_t count) const {
  if (start < 0 || count < 0 || start + count > frames()) {
    throw DimensionError(fmt::format("frame slice [{}, {}) outside clip of {} frames", start,
                                     start + count, frames()));
  }
  VideoClip out(count, height(), width());
  const int64_t plane = height() * width();
  for (int64_t c = 0; c < kChannels; ++c) {
    std::memcpy(&out.at(c, 0, 0, 0), &tensor_.data()[tensor_.Offset(0, c, start, 0, 0)],
                sizeof(float) * static_cast<size_t>(count * plane));
  }
  return out;
}

VideoClip VideoClip::Clamped() const {
  VideoClip out = *this;
  for (float& v : out.tensor_.storage()) v = std::clamp(v, -1.0f, 1.0f);
  return out;
}

bool VideoClip::InRange() const {
  return std::all_of(tensor_.storage().begin(), tensor_.storage().end(),
                     [](float v) { return v >= -1.0f && v <= 1.0f; });
}

}  // namespace vidtex
