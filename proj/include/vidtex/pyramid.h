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

#ifndef VIDTEX_PYRAMID_H_
#define VIDTEX_PYRAMID_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vidtex/video.h"

namespace vidtex {

struct SpatialDims {
  int64_t height = 0;
  int64_t width = 0;
  bool operator==(const SpatialDims&) const = default;
};

/// Spatial sizes of the pyramid levels, coarsest first.
///
/// Interior sizes are geometric interpolations between the two endpoints,
/// rounded to the nearest pixel; the endpoints are exact. The scale factor is
/// derived from the endpoints: r = (finest / coarsest)^(1 / (N - 1)).
struct ScaleSchedule {
  std::vector<SpatialDims> dims;
  double r_height = 1.0;
  double r_width = 1.0;

  int num_scales() const { return static_cast<int>(dims.size()); }
  const SpatialDims& finest() const { return dims.back(); }
  /// Height-axis factor; equal to the width factor for square schedules.
  double r() const { return r_height; }

  /// One level only, at the given size.
  static ScaleSchedule Single(SpatialDims d) { return ScaleSchedule{{d}, 1.0, 1.0}; }
  std::string ToString() const;
};

/// Square schedule. Throws std::invalid_argument when num_scales < 2,
/// coarsest >= finest, coarsest < 1, or rounding collapses two levels.
ScaleSchedule BuildScaleSchedule(int64_t coarsest, int64_t finest, int num_scales);
/// Non-square schedule; each axis interpolates between its own endpoints.
ScaleSchedule BuildScaleSchedule(SpatialDims coarsest, SpatialDims finest, int num_scales);

/// Per-frame area-average resampling to a smaller (or equal) size. Equal
/// dims return a bitwise copy.
VideoClip DownsampleVideo(const VideoClip& clip, int64_t target_h, int64_t target_w);

/// One clip per schedule level; every level keeps the source frame count.
std::vector<VideoClip> BuildTrainingPyramid(const VideoClip& video, const ScaleSchedule& schedule);

}  // namespace vidtex

#endif  // VIDTEX_PYRAMID_H_
