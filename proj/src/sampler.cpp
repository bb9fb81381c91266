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

#include "vidtex/sampler.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "vidtex/rng.h"

namespace vidtex {

namespace {

void RequireTrained(const PyramidModel& model) {
  if (model.scales.empty()) throw std::logic_error("model has no trained scales");
  if (model.scales.size() != model.schedule.dims.size()) {
    throw std::logic_error(fmt::format("model has {} scales but a {}-level schedule", model.scales.size(),
                                       model.schedule.dims.size()));
  }
}

}  // namespace

std::vector<SpatialDims> ScaledDims(const ScaleSchedule& schedule, SpatialDims finest) {
  if (finest.height < 1 || finest.width < 1) {
    throw DimensionError(fmt::format("sample size {}x{} must be positive", finest.height, finest.width));
  }
  const double fh = static_cast<double>(finest.height) / static_cast<double>(schedule.finest().height);
  const double fw = static_cast<double>(finest.width) / static_cast<double>(schedule.finest().width);
  std::vector<SpatialDims> out;
  for (const auto& d : schedule.dims) {
    out.push_back({std::max<int64_t>(1, std::llround(static_cast<double>(d.height) * fh)),
                   std::max<int64_t>(1, std::llround(static_cast<double>(d.width) * fw))});
  }
  out.back() = finest;
  return out;
}

VideoClip Sample(const PyramidModel& model, uint64_t seed, std::optional<SpatialDims> finest) {
  RequireTrained(model);
  Rng rng(seed);
  std::vector<SpatialDims> dims;
  if (finest) dims = ScaledDims(model.schedule, *finest);
  const int last = static_cast<int>(model.scales.size()) - 1;
  Tensor<float> out = SampleChain(model.scales, last, model.frames, rng, finest ? &dims : nullptr);
  return VideoClip(std::move(out)).Clamped();
}

VideoClip Reconstruct(const PyramidModel& model) {
  RequireTrained(model);
  return VideoClip(ReconstructionChain(model.scales, static_cast<int>(model.scales.size()) - 1));
}

}  // namespace vidtex
