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

// Procedural dynamic textures for running without a dataset. All kinds are
// periodic in space and deterministic in the spec.
//
//   advected-noise       band-limited random field drifting by (vx, vy)
//                        px/frame while its phases slowly evolve
//   translating-grating  a fixed colour grating shifted cyclically by
//                        (vx, vy) px/frame; exact for integer velocities
//   rotating-pattern     angular pattern turning by angular_velocity
//                        rad/frame about the centre
//   multi-phase          num_phases advected fields with distinct spectra and
//                        directions; frame t shows phase (t / phase_len) mod
//                        num_phases

#ifndef VIDTEX_SYNTHETIC_H_
#define VIDTEX_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "vidtex/video.h"

namespace vidtex {

enum class SyntheticKind { kAdvectedNoise, kTranslatingGrating, kRotatingPattern, kMultiPhase };

/// Throws DataError on an unknown name.
SyntheticKind ParseSyntheticKind(std::string_view name);
std::string SyntheticKindName(SyntheticKind kind);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kAdvectedNoise;
  int64_t frames = 16;
  int64_t size = 32;
  double vx = 1.0;
  double vy = 0.5;
  double angular_velocity = 0.15;
  int64_t phase_len = 16;
  int num_phases = 3;
  uint64_t seed = 0;
};

/// Values lie in [-0.9, 0.9]. Throws std::invalid_argument on a
/// non-positive size, frame count or phase length.
VideoClip MakeSynthetic(const SyntheticSpec& spec);

}  // namespace vidtex

#endif  // VIDTEX_SYNTHETIC_H_
