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

// Per-scale generator and patch critic, and the coarse-to-fine chains that
// connect the scales.
//
// Scale 0 maps noise straight to video: x0 = tanh(trunk(z0)). A finer scale n
// refines the upsampled output of scale n-1:
//
//   up = upsample(x_{n-1});  x_n = tanh(trunk(sigma_n * z_n + up)) + up.
//
// Sampling draws fresh z at every scale. Reconstruction feeds the recorded
// z0 at scale 0 and zero noise above it.

#ifndef VIDTEX_MODEL_H_
#define VIDTEX_MODEL_H_

#include <cstdint>
#include <vector>

#include "vidtex/config.h"
#include "vidtex/nn_ops.h"
#include "vidtex/pyramid.h"
#include "vidtex/rng.h"

namespace vidtex {

template <typename T>
struct ConvLayer {
  ad::ConvSpec spec;
  ad::Var<T> weight;
  ad::Var<T> bias;
  bool normalized = false;  // followed by batch norm + leaky ReLU
  ad::Var<T> gamma;
  ad::Var<T> beta;
  ad::RunningStats<T> stats;
};

/// Stride-1 "same" conv layers; every layer but the last is followed by
/// batch norm and leaky ReLU. The last layer's output is returned raw.
template <typename T>
class ConvStack {
 public:
  struct Options {
    std::array<int64_t, 3> kernel{3, 3, 3};
    ad::PaddingMode padding = ad::PaddingMode::kZero;
    double init_std = 0.02;
    double leaky_slope = 0.2;
    double bn_eps = 1e-5;
  };

  ConvStack() = default;
  /// `channels` lists in_channels of every layer followed by the final
  /// out_channels, e.g. {3, 32, 32, 1}. Weights ~ N(0, init_std^2), zero
  /// bias, gamma = 1, beta = 0.
  ConvStack(const std::vector<int64_t>& channels, const Options& options, Rng& rng);

  /// Batch norm in the given mode; never touches running statistics.
  ad::Var<T> Forward(const ad::Var<T>& x,
                     ad::BatchNormMode mode = ad::BatchNormMode::kTrain) const;
  /// Train-mode forward that also updates running statistics.
  ad::Var<T> ForwardTraining(const ad::Var<T>& x);

  std::vector<ad::Var<T>> Parameters() const;
  std::vector<ConvLayer<T>>& layers() { return layers_; }
  const std::vector<ConvLayer<T>>& layers() const { return layers_; }
  const Options& options() const { return options_; }
  int64_t in_channels() const { return layers_.front().spec.in_channels; }
  int64_t out_channels() const { return layers_.back().spec.out_channels; }

  /// Receptive field along axis 0 (t), 1 (h) or 2 (w): 1 + sum(k - 1).
  int64_t ReceptiveField(int axis) const;

 private:
  ad::Var<T> Run(const ad::Var<T>& x, ad::BatchNormMode mode, bool update_stats,
                 std::vector<ad::RunningStats<T>>* scratch) const;

  Options options_;
  std::vector<ConvLayer<T>> layers_;
};

extern template class ConvStack<float>;
extern template class ConvStack<double>;

using Generator = ConvStack<float>;
using Discriminator = ConvStack<float>;

/// Everything learned at one pyramid level.
struct ScaleModel {
  int scale_index = 0;
  SpatialDims dims;
  Generator generator;
  Discriminator discriminator;
  /// Fixed reconstruction noise z0 (1, 3, T, H0, W0); empty for n > 0.
  Tensor<float> rec_noise;
  /// Noise amplitude; 1 at scale 0.
  float noise_amp = 1.0f;
  /// Reconstruction MSE with the final parameters.
  float final_rec_loss = 0.0f;
};

/// A trained pyramid: one ScaleModel per schedule level, coarsest first.
struct PyramidModel {
  TrainConfig config;
  ScaleSchedule schedule;
  int64_t frames = 0;
  std::vector<ScaleModel> scales;
};

/// Fresh parameters for scale `n`; deterministic in (n, config, seed).
ScaleModel InitScaleModel(int scale_index, const TrainConfig& config, uint64_t seed);

/// Generator at one scale. `prev_up` is undefined at scale 0 and otherwise
/// must match `noise` in shape. Batch norm uses the batch statistics.
ad::Var<float> GeneratorForward(const ScaleModel& model, const ad::Var<float>& noise,
                                const ad::Var<float>& prev_up);
/// As GeneratorForward, also updating the generator's running statistics.
ad::Var<float> GeneratorForwardTraining(ScaleModel& model, const ad::Var<float>& noise,
                                        const ad::Var<float>& prev_up);

/// Mean of the critic's one-channel patch map. Throws DimensionError unless
/// the clip has 3 channels.
ad::Var<float> DiscriminatorForward(const ScaleModel& model, const ad::Var<float>& clip,
                                    ad::BatchNormMode mode = ad::BatchNormMode::kTrain);
/// Raw patch map (N, 1, T, H, W).
ad::Var<float> DiscriminatorPatchMap(const ScaleModel& model, const ad::Var<float>& clip,
                                     ad::BatchNormMode mode = ad::BatchNormMode::kTrain);

/// Noise shape of a scale for clips of `frames` frames.
Shape NoiseShape(const SpatialDims& dims, int64_t frames);

/// Output of scale `last` (inclusive) through the sampling chain, unclamped.
Tensor<float> SampleChain(const std::vector<ScaleModel>& scales, int last, int64_t frames, Rng& rng,
                          const std::vector<SpatialDims>* dims_override = nullptr);
/// Output of scale `last` (inclusive) through the reconstruction chain.
Tensor<float> ReconstructionChain(const std::vector<ScaleModel>& scales, int last);

/// FNV-1a over every parameter and running statistic of a scale.
uint64_t ParameterHash(const ScaleModel& model);

}  // namespace vidtex

#endif  // VIDTEX_MODEL_H_
