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

#ifndef VIDTEX_CONFIG_H_
#define VIDTEX_CONFIG_H_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "vidtex/nn_ops.h"

namespace vidtex {

/// update_period value that disables the data update schedule.
inline constexpr int64_t kNeverUpdate = std::numeric_limits<int64_t>::max();

/// Every training hyperparameter. Defaults are the full profile.
///
/// Text form is flat `key = value` lines, one per field, using the field
/// names below; `#` starts a comment. `update_period = inf` disables data
/// updates and `padding = zero|reflect` selects the conv padding mode.
struct TrainConfig {
  int64_t clip_len = 16;
  int64_t coarsest = 25;
  int64_t finest = 150;
  int num_scales = 8;
  int64_t steps_per_scale = 2000;
  int d_steps = 3;
  int g_steps = 3;
  double lr_g = 5e-4;
  double lr_d = 5e-4;
  double lr_decay_at = 0.8;      // fraction of steps_per_scale
  double lr_decay_factor = 0.1;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double lambda_gp = 10.0;
  double eta = 10.0;
  int64_t update_period = 100;
  int64_t update_stride = 8;
  uint64_t seed = 0;
  int64_t hidden_channels = 32;
  int gen_layers = 5;
  int disc_layers = 5;
  int64_t kernel_size = 3;
  double leaky_slope = 0.2;
  double bn_eps = 1e-5;
  double init_std = 0.02;
  ad::PaddingMode padding = ad::PaddingMode::kZero;
  bool debug_freeze_check = false;

  static TrainConfig Full() { return TrainConfig{}; }
  /// Reduced profile sized for a single desktop CPU core.
  static TrainConfig Desk();
  /// "full" or "desk"; throws DataError otherwise.
  static TrainConfig Profile(std::string_view name);

  /// Throws std::invalid_argument naming the offending field.
  void Validate() const;

  /// Applies `key = value` text on top of the current values.
  /// Unknown keys and malformed values throw DataError.
  void ApplyText(std::string_view text);
  void Set(std::string_view key, std::string_view value);
  std::string ToText() const;

  bool operator==(const TrainConfig&) const = default;
};

}  // namespace vidtex

#endif  // VIDTEX_CONFIG_H_
