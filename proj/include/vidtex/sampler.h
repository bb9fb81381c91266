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

#ifndef VIDTEX_SAMPLER_H_
#define VIDTEX_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "vidtex/model.h"
#include "vidtex/video.h"

namespace vidtex {

/// Level sizes when the finest level is resized to `finest`: every level is
/// scaled by the same per-axis factor and rounded, with a floor of 1 px.
std::vector<SpatialDims> ScaledDims(const ScaleSchedule& schedule, SpatialDims finest);

/// A new video from fresh noise at every scale, clamped to [-1, 1]. Pure in
/// (model, seed, finest). Other sizes than the trained one are experimental.
/// Throws std::logic_error on a model without scales.
VideoClip Sample(const PyramidModel& model, uint64_t seed, std::optional<SpatialDims> finest = std::nullopt);

/// The fixed-noise reconstruction of the finest level, exactly as computed
/// during training (not clamped). Throws DataError when z0 is missing.
VideoClip Reconstruct(const PyramidModel& model);

}  // namespace vidtex

#endif  // VIDTEX_SAMPLER_H_
