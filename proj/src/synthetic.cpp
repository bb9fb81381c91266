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

#include "vidtex/synthetic.h"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "vidtex/error.h"
#include "vidtex/rng.h"

namespace vidtex {

namespace {

constexpr double kPeak = 0.9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Mode {
  int fx, fy;
  double phase, drift;
  std::array<double, 3> amp;
};

// Sum of cosines with integer frequencies, hence periodic on a size-S grid.
class PeriodicField {
 public:
  PeriodicField(Rng& rng, int modes, int min_freq, int max_freq, double max_drift) {
    double total = 0;
    while (static_cast<int>(modes_.size()) < modes) {
      Mode m{};
      m.fx = static_cast<int>(std::floor(rng.Uniform(-max_freq, max_freq + 1)));
      m.fy = static_cast<int>(std::floor(rng.Uniform(-max_freq, max_freq + 1)));
      const int band = std::max(std::abs(m.fx), std::abs(m.fy));
      if (band < min_freq || band > max_freq) continue;
      m.phase = rng.Uniform(0, kTwoPi);
      m.drift = rng.Uniform(-max_drift, max_drift);
      double peak = 0;
      for (auto& a : m.amp) {
        a = rng.Uniform(0.2, 1.0) / band;
        peak = std::max(peak, a);
      }
      total += peak;
      modes_.push_back(m);
    }
    scale_ = kPeak / total;
  }

  double Eval(int c, double x, double y, double size, double t) const {
    double v = 0;
    for (const auto& m : modes_) {
      v += m.amp[c] * std::cos(kTwoPi * (m.fx * x + m.fy * y) / size + m.phase + m.drift * t);
    }
    return scale_ * v;
  }

 private:
  std::vector<Mode> modes_;
  double scale_ = 1;
};

void RequirePositive(int64_t v, std::string_view what) {
  if (v < 1) throw std::invalid_argument(fmt::format("synthetic {} must be >= 1, got {}", what, v));
}

VideoClip Advected(const SyntheticSpec& s, Rng& rng) {
  const PeriodicField field(rng, 12, 1, 4, 0.08);
  const auto n = static_cast<double>(s.size);
  VideoClip clip(s.frames, s.size, s.size);
  for (int64_t t = 0; t < s.frames; ++t) {
    const double dx = s.vx * static_cast<double>(t), dy = s.vy * static_cast<double>(t);
    for (int64_t y = 0; y < s.size; ++y) {
      for (int64_t x = 0; x < s.size; ++x) {
        for (int c = 0; c < 3; ++c) {
          clip.at(c, t, y, x) = static_cast<float>(
              field.Eval(c, static_cast<double>(x) - dx, static_cast<double>(y) - dy, n, static_cast<double>(t)));
        }
      }
    }
  }
  return clip;
}

float Wrapped(const std::vector<float>& img, int64_t size, int c, int64_t y, int64_t x) {
  const int64_t yy = ((y % size) + size) % size;
  const int64_t xx = ((x % size) + size) % size;
  return img[static_cast<size_t>((c * size + yy) * size + xx)];
}

VideoClip Grating(const SyntheticSpec& s, Rng& rng) {
  const int64_t n = s.size;
  std::vector<Mode> modes;
  for (int k = 0; k < 3; ++k) {
    Mode m{};
    m.fx = 1 + static_cast<int>(rng.Uniform(0, 3));
    m.fy = k == 2 ? 1 : 0;
    m.phase = rng.Uniform(0, kTwoPi);
    for (auto& a : m.amp) a = rng.Uniform(0.2, 1.0);
    modes.push_back(m);
  }
  std::vector<float> base(static_cast<size_t>(3 * n * n));
  for (int c = 0; c < 3; ++c) {
    double total = 0;
    for (const auto& m : modes) total += m.amp[c];
    for (int64_t y = 0; y < n; ++y) {
      for (int64_t x = 0; x < n; ++x) {
        double v = 0;
        for (const auto& m : modes) {
          v += m.amp[c] * std::cos(kTwoPi * static_cast<double>(m.fx * x + m.fy * y) / static_cast<double>(n) + m.phase);
        }
        base[static_cast<size_t>((c * n + y) * n + x)] = static_cast<float>(kPeak * v / total);
      }
    }
  }
  VideoClip clip(s.frames, n, n);
  for (int64_t t = 0; t < s.frames; ++t) {
    const double sx = s.vx * static_cast<double>(t), sy = s.vy * static_cast<double>(t);
    const auto ix = static_cast<int64_t>(std::floor(sx)), iy = static_cast<int64_t>(std::floor(sy));
    const double fx = sx - static_cast<double>(ix), fy = sy - static_cast<double>(iy);
    for (int c = 0; c < 3; ++c) {
      for (int64_t y = 0; y < n; ++y) {
        for (int64_t x = 0; x < n; ++x) {
          const int64_t x0 = x - ix, y0 = y - iy;
          if (fx == 0.0 && fy == 0.0) {
            clip.at(c, t, y, x) = Wrapped(base, n, c, y0, x0);
            continue;
          }
          // Sample the base at (x - sx, y - sy) bilinearly with wrap-around.
          const double v = (1 - fy) * ((1 - fx) * Wrapped(base, n, c, y0, x0) + fx * Wrapped(base, n, c, y0, x0 - 1)) +
                           fy * ((1 - fx) * Wrapped(base, n, c, y0 - 1, x0) + fx * Wrapped(base, n, c, y0 - 1, x0 - 1));
          clip.at(c, t, y, x) = static_cast<float>(v);
        }
      }
    }
  }
  return clip;
}

VideoClip Rotating(const SyntheticSpec& s, Rng& rng) {
  const int arms = 2 + static_cast<int>(rng.Uniform(0, 3));
  const double wavelength = static_cast<double>(s.size) / rng.Uniform(2.0, 4.0);
  std::array<double, 3> phase{};
  for (auto& p : phase) p = rng.Uniform(0, kTwoPi);
  const double centre = 0.5 * static_cast<double>(s.size - 1);
  VideoClip clip(s.frames, s.size, s.size);
  for (int64_t t = 0; t < s.frames; ++t) {
    const double turn = s.angular_velocity * static_cast<double>(t);
    for (int64_t y = 0; y < s.size; ++y) {
      for (int64_t x = 0; x < s.size; ++x) {
        const double dx = static_cast<double>(x) - centre, dy = static_cast<double>(y) - centre;
        const double theta = std::atan2(dy, dx);
        const double ring = 0.5 + 0.5 * std::cos(kTwoPi * std::hypot(dx, dy) / wavelength);
        for (int c = 0; c < 3; ++c) {
          clip.at(c, t, y, x) = static_cast<float>(kPeak * ring * std::cos(arms * (theta - turn) + phase[c]));
        }
      }
    }
  }
  return clip;
}

VideoClip MultiPhase(const SyntheticSpec& s, Rng& rng) {
  RequirePositive(s.phase_len, "phase_len");
  RequirePositive(s.num_phases, "num_phases");
  std::vector<PeriodicField> fields;
  std::vector<std::array<double, 2>> velocity;
  const double speed = std::max(std::hypot(s.vx, s.vy), 0.5);
  for (int p = 0; p < s.num_phases; ++p) {
    // Low and high bands alternate so phases differ in scale as well as
    // direction.
    const int lo = p % 2 == 0 ? 1 : 3;
    fields.emplace_back(rng, 10, lo, lo + 2, 0.08);
    const double angle = kTwoPi * static_cast<double>(p) / static_cast<double>(s.num_phases) + rng.Uniform(0, 0.5);
    velocity.push_back({speed * std::cos(angle), speed * std::sin(angle)});
  }
  const auto n = static_cast<double>(s.size);
  VideoClip clip(s.frames, s.size, s.size);
  for (int64_t t = 0; t < s.frames; ++t) {
    const auto p = static_cast<size_t>((t / s.phase_len) % s.num_phases);
    const double tt = static_cast<double>(t);
    for (int64_t y = 0; y < s.size; ++y) {
      for (int64_t x = 0; x < s.size; ++x) {
        for (int c = 0; c < 3; ++c) {
          clip.at(c, t, y, x) = static_cast<float>(fields[p].Eval(
              c, static_cast<double>(x) - velocity[p][0] * tt, static_cast<double>(y) - velocity[p][1] * tt, n, tt));
        }
      }
    }
  }
  return clip;
}

}  // namespace

SyntheticKind ParseSyntheticKind(std::string_view name) {
  if (name == "advected-noise") return SyntheticKind::kAdvectedNoise;
  if (name == "translating-grating") return SyntheticKind::kTranslatingGrating;
  if (name == "rotating-pattern") return SyntheticKind::kRotatingPattern;
  if (name == "multi-phase") return SyntheticKind::kMultiPhase;
  throw DataError(fmt::format(
      "unknown synthetic kind '{}' (expected advected-noise|translating-grating|rotating-pattern|multi-phase)", name));
}

std::string SyntheticKindName(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kAdvectedNoise: return "advected-noise";
    case SyntheticKind::kTranslatingGrating: return "translating-grating";
    case SyntheticKind::kRotatingPattern: return "rotating-pattern";
    case SyntheticKind::kMultiPhase: return "multi-phase";
  }
  return "unknown";
}

VideoClip MakeSynthetic(const SyntheticSpec& spec) {
  RequirePositive(spec.frames, "frame count");
  RequirePositive(spec.size, "size");
  Rng rng(Rng::Derive(spec.seed, static_cast<uint64_t>(spec.kind)));
  switch (spec.kind) {
    case SyntheticKind::kAdvectedNoise: return Advected(spec, rng);
    case SyntheticKind::kTranslatingGrating: return Grating(spec, rng);
    case SyntheticKind::kRotatingPattern: return Rotating(spec, rng);
    case SyntheticKind::kMultiPhase: return MultiPhase(spec, rng);
  }
  throw std::logic_error("unhandled synthetic kind");
}

}  // namespace vidtex
