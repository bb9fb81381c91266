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

#include "vidtex/pyramid.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace vidtex {

namespace {

std::vector<int64_t> GeometricAxis(int64_t lo, int64_t hi, int n, double* ratio) {
  if (lo < 1) throw std::invalid_argument(fmt::format("coarsest size must be >= 1, got {}", lo));
  if (lo >= hi) {
    throw std::invalid_argument(
        fmt::format("coarsest size {} must be smaller than finest size {}", lo, hi));
  }
  const double r = std::pow(static_cast<double>(hi) / static_cast<double>(lo), 1.0 / (n - 1));
  std::vector<int64_t> out(static_cast<size_t>(n));
  out.front() = lo;
  out.back() = hi;
  for (int i = 1; i + 1 < n; ++i) {
    out[i] = std::llround(static_cast<double>(lo) * std::pow(r, i));
  }
  for (int i = 1; i < n; ++i) {
    if (out[i] <= out[i - 1]) {
      throw std::invalid_argument(fmt::format(
          "{} scales between {} and {} px collapse after rounding", n, lo, hi));
    }
  }
  *ratio = r;
  return out;
}

// Fraction of each source cell covered by target cell o, for an axis resized
// from `in` to `out` cells (out <= in).
struct AreaTaps {
  std::vector<int64_t> begin;
  std::vector<std::vector<double>> weights;
};

AreaTaps AreaAxis(int64_t in, int64_t out) {
  AreaTaps taps;
  taps.begin.resize(static_cast<size_t>(out));
  taps.weights.resize(static_cast<size_t>(out));
  const double span = static_cast<double>(in) / static_cast<double>(out);
  for (int64_t o = 0; o < out; ++o) {
    const double lo = static_cast<double>(o) * span;
    const double hi = static_cast<double>(o + 1) * span;
    const int64_t first = static_cast<int64_t>(std::floor(lo));
    const int64_t last = std::min<int64_t>(in - 1, static_cast<int64_t>(std::ceil(hi)) - 1);
    taps.begin[o] = first;
    for (int64_t i = first; i <= last; ++i) {
      const double overlap = std::min(hi, static_cast<double>(i + 1)) - std::max(lo, static_cast<double>(i));
      taps.weights[o].push_back(std::max(0.0, overlap) / span);
    }
  }
  return taps;
}

}  // namespace

std::string ScaleSchedule::ToString() const {
  std::string s;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += fmt::format("{}x{}", dims[i].height, dims[i].width);
  }
  return s;
}

ScaleSchedule BuildScaleSchedule(int64_t coarsest, int64_t finest, int num_scales) {
  return BuildScaleSchedule(SpatialDims{coarsest, coarsest}, SpatialDims{finest, finest}, num_scales);
}

ScaleSchedule BuildScaleSchedule(SpatialDims coarsest, SpatialDims finest, int num_scales) {
  if (num_scales < 2) {
    throw std::invalid_argument(fmt::format("num_scales must be >= 2, got {}", num_scales));
  }
  ScaleSchedule schedule;
  const auto hs = GeometricAxis(coarsest.height, finest.height, num_scales, &schedule.r_height);
  const auto ws = GeometricAxis(coarsest.width, finest.width, num_scales, &schedule.r_width);
  for (int i = 0; i < num_scales; ++i) schedule.dims.push_back({hs[i], ws[i]});
  return schedule;
}

VideoClip DownsampleVideo(const VideoClip& clip, int64_t target_h, int64_t target_w) {
  if (target_h > clip.height() || target_w > clip.width() || target_h < 1 || target_w < 1) {
    throw DimensionError(fmt::format("downsample_video: target {}x{} must be within 1..{}x{}",
                                     target_h, target_w, clip.height(), clip.width()));
  }
  if (target_h == clip.height() && target_w == clip.width()) return clip;

  const AreaTaps th = AreaAxis(clip.height(), target_h);
  const AreaTaps tw = AreaAxis(clip.width(), target_w);
  VideoClip out(clip.frames(), target_h, target_w);
  std::vector<double> rows(static_cast<size_t>(clip.height() * target_w));
  for (int64_t c = 0; c < VideoClip::kChannels; ++c) {
    for (int64_t t = 0; t < clip.frames(); ++t) {
      for (int64_t h = 0; h < clip.height(); ++h) {
        for (int64_t ow = 0; ow < target_w; ++ow) {
          double acc = 0;
          const auto& wts = tw.weights[ow];
          for (size_t k = 0; k < wts.size(); ++k) {
            acc += wts[k] * clip.at(c, t, h, tw.begin[ow] + static_cast<int64_t>(k));
          }
          rows[h * target_w + ow] = acc;
        }
      }
      for (int64_t oh = 0; oh < target_h; ++oh) {
        const auto& wts = th.weights[oh];
        for (int64_t ow = 0; ow < target_w; ++ow) {
          double acc = 0;
          for (size_t k = 0; k < wts.size(); ++k) {
            acc += wts[k] * rows[(th.begin[oh] + static_cast<int64_t>(k)) * target_w + ow];
          }
          // Convex combination; the clamp only absorbs rounding.
          out.at(c, t, oh, ow) = static_cast<float>(std::clamp(acc, -1.0, 1.0));
        }
      }
    }
  }
  return out;
}

std::vector<VideoClip> BuildTrainingPyramid(const VideoClip& video, const ScaleSchedule& schedule) {
  if (schedule.dims.empty()) throw std::invalid_argument("empty scale schedule");
  const SpatialDims& fin = schedule.finest();
  if (video.height() < fin.height || video.width() < fin.width) {
    throw DimensionError(fmt::format("source video {}x{} is smaller than finest scale {}x{}",
                                     video.height(), video.width(), fin.height, fin.width));
  }
  std::vector<VideoClip> levels;
  levels.reserve(schedule.dims.size());
  for (const auto& d : schedule.dims) levels.push_back(DownsampleVideo(video, d.height, d.width));
  return levels;
}

}  // namespace vidtex
