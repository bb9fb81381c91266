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

// Coarse-to-fine training. Each scale runs steps_per_scale iterations of
// d_steps critic updates followed by g_steps generator updates; coarser
// scales are frozen.
//
// The adversarial real clip follows a sliding window over the source video
// that moves by update_stride frames every update_period steps and wraps to
// frame 0 once it would run past the end. The reconstruction target stays
// the first window for the whole run.

#ifndef VIDTEX_TRAINING_H_
#define VIDTEX_TRAINING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vidtex/autodiff.h"
#include "vidtex/config.h"
#include "vidtex/losses.h"
#include "vidtex/model.h"
#include "vidtex/pyramid.h"
#include "vidtex/video.h"

namespace vidtex {

struct ClipCursor {
  int64_t start_frame = 0;
  int64_t source_len = 0;
};

/// Cursor in effect at `step` given the cursor of step - 1. Advances only on
/// positive multiples of update_period.
ClipCursor NextClip(const ClipCursor& cursor, int64_t step, const TrainConfig& config);

/// Closed form of iterating NextClip from start 0 up to `step`.
int64_t ClipStartAt(int64_t step, const TrainConfig& config, int64_t source_len);

/// Adam over a fixed parameter list, reading each parameter's accumulated
/// gradient. Parameters without a gradient are skipped.
class Adam {
 public:
  Adam(std::vector<ad::Var<float>> params, double lr, double beta1, double beta2, double eps = 1e-8);

  void Step();
  void ZeroGrad();
  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  int64_t steps() const { return t_; }

 private:
  std::vector<ad::Var<float>> params_;
  std::vector<std::vector<double>> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
};

/// Per-scale views of the source video.
struct TrainingData {
  ScaleSchedule schedule;
  /// Source video (all frames) downsampled to each level.
  std::vector<VideoClip> levels;
  /// First window of each level; the reconstruction target.
  std::vector<VideoClip> rec_targets;
  int64_t source_len = 0;
};

/// Builds the schedule (a single level at `finest` when num_scales = 1) and
/// the per-level videos. Throws DimensionError when the source is shorter
/// than clip_len or smaller than the finest level.
TrainingData PrepareTrainingData(const VideoClip& video, const TrainConfig& config);

struct TrainLogEntry {
  int64_t step = 0;
  int scale = 0;
  LossReport report;
  int64_t clip_start = 0;
};

/// Tab-separated: step, scale, d_loss, g_adv, rec, gp.
std::string FormatLogLine(const TrainLogEntry& entry);
std::string LogHeader();

using TrainLogger = std::function<void(const TrainLogEntry&)>;

/// Trains scale `n` on top of `frozen` (scales 0..n-1, never modified).
/// Records z0 at scale 0 and the noise amplitude above it. Throws
/// NumericError on a non-finite loss, naming the step and the breakdown.
ScaleModel TrainScale(const std::vector<ScaleModel>& frozen, int n, const TrainingData& data,
                      const TrainConfig& config, const TrainLogger& log = {});

/// Validates the config and trains every level in order.
PyramidModel TrainPyramid(const VideoClip& video, const TrainConfig& config, const TrainLogger& log = {});

/// Reconstruction MSE of scale `last` against its target.
double ReconstructionError(const std::vector<ScaleModel>& scales, int last, const VideoClip& target);

}  // namespace vidtex

#endif  // VIDTEX_TRAINING_H_
