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

#ifndef VIDTEX_NN_OPS_H_
#define VIDTEX_NN_OPS_H_

#include <array>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "vidtex/autodiff.h"

namespace vidtex::ad {

enum class PaddingMode { kZero, kReflect };

/// Stride-1 3-D convolution geometry. Kernel and padding are (t, h, w).
struct ConvSpec {
  std::array<int64_t, 3> kernel{3, 3, 3};
  std::array<int64_t, 3> padding{1, 1, 1};
  int64_t in_channels = 1;
  int64_t out_channels = 1;
  PaddingMode padding_mode = PaddingMode::kZero;

  /// Padding (k-1)/2 on every axis, so odd kernels preserve spatiotemporal dims.
  static ConvSpec Same(int64_t in_channels, int64_t out_channels,
                       std::array<int64_t, 3> kernel = {3, 3, 3},
                       PaddingMode mode = PaddingMode::kZero);

  Shape WeightShape() const {
    return Shape(out_channels, in_channels, kernel[0], kernel[1], kernel[2]);
  }
  Shape OutputShape(const Shape& input) const;
};

/// y = W * x + b. `bias` may be undefined; otherwise shape (1, C_out, 1, 1, 1).
template <typename T>
Var<T> Conv3d(const Var<T>& input, const Var<T>& weight, const Var<T>& bias,
              const ConvSpec& spec);

// Zero-padded stride-1 correlation and its two adjoints. Each is bilinear and
// the three are closed under differentiation, which is what makes second
// derivatives through convolutions available.
template <typename T>
Var<T> ConvCorrelate(const Var<T>& input, const Var<T>& weight,
                     const std::array<int64_t, 3>& padding);
template <typename T>
Var<T> ConvInputGrad(const Var<T>& grad_out, const Var<T>& weight,
                     const std::array<int64_t, 3>& padding, const Shape& input_shape);
template <typename T>
Var<T> ConvWeightGrad(const Var<T>& input, const Var<T>& grad_out,
                      const std::array<int64_t, 3>& padding, const Shape& weight_shape);

/// Reflection padding of the (t, h, w) axes; each pad must be < that dim.
template <typename T>
Var<T> ReflectPad(const Var<T>& input, const std::array<int64_t, 3>& padding);

/// Per-frame bilinear resize to a larger (or equal) H x W with half-pixel
/// centers and edge clamping.
template <typename T>
Var<T> UpsampleSpatial(const Var<T>& input, int64_t target_h, int64_t target_w);

/// Interpolation taps for resizing one axis from `in` to `out` samples.
struct LinearTaps {
  std::vector<int64_t> lo, hi;
  std::vector<double> frac;  // weight of `hi`
};
LinearTaps BilinearTaps(int64_t in, int64_t out);

enum class BatchNormMode { kTrain, kEval };

template <typename T>
struct RunningStats {
  std::vector<T> mean;
  std::vector<T> var;
  T momentum = T(0.1);

  explicit RunningStats(int64_t channels = 0)
      : mean(static_cast<size_t>(channels), T(0)), var(static_cast<size_t>(channels), T(1)) {}
};

/// Batch normalization over (batch, frames, height, width) per channel.
/// Train mode normalizes with batch statistics and, when `stats` is non-null,
/// folds them into the running averages (unbiased variance). Eval mode uses
/// `stats`, which must then be non-null.
template <typename T>
Var<T> BatchNorm3d(const Var<T>& input, const Var<T>& gamma, const Var<T>& beta, T eps,
                   BatchNormMode mode, std::type_identity_t<RunningStats<T>>* stats);

enum class ActivationKind { kLeakyRelu, kTanh };

struct Activation {
  ActivationKind kind = ActivationKind::kLeakyRelu;
  double slope = 0.2;

  static Activation Leaky(double s) { return {ActivationKind::kLeakyRelu, s}; }
  static Activation TanhAct() { return {ActivationKind::kTanh, 0.0}; }
};

template <typename T>
Var<T> Activate(const Var<T>& input, const Activation& act);

/// Mean squared error over all elements.
template <typename T>
Var<T> MeanSquaredError(const Var<T>& a, const Var<T>& b);

}  // namespace vidtex::ad

#endif  // VIDTEX_NN_OPS_H_
