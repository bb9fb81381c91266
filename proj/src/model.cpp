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

#include "vidtex/model.h"

#include <cstring>

#include <fmt/format.h>

namespace vidtex {

using ad::Var;

template <typename T>
ConvStack<T>::ConvStack(const std::vector<int64_t>& channels, const Options& options, Rng& rng)
    : options_(options) {
  if (channels.size() < 2) throw std::invalid_argument("conv stack needs at least one layer");
  for (size_t i = 0; i + 1 < channels.size(); ++i) {
    ConvLayer<T> layer;
    layer.spec = ad::ConvSpec::Same(channels[i], channels[i + 1], options.kernel, options.padding);
    layer.weight = Var<T>::Leaf(rng.NormalTensor<T>(layer.spec.WeightShape(), options.init_std), true);
    layer.bias = Var<T>::Leaf(Tensor<T>(ChannelShape(channels[i + 1])), true);
    layer.normalized = i + 2 < channels.size();
    if (layer.normalized) {
      layer.gamma = Var<T>::Leaf(Tensor<T>(ChannelShape(channels[i + 1]), T(1)), true);
      layer.beta = Var<T>::Leaf(Tensor<T>(ChannelShape(channels[i + 1])), true);
      layer.stats = ad::RunningStats<T>(channels[i + 1]);
    }
    layers_.push_back(std::move(layer));
  }
}

template <typename T>
Var<T> ConvStack<T>::Run(const Var<T>& x, ad::BatchNormMode mode, bool update_stats,
                         std::vector<ad::RunningStats<T>>* scratch) const {
  Var<T> h = x;
  for (size_t i = 0; i < layers_.size(); ++i) {
    const ConvLayer<T>& layer = layers_[i];
    h = ad::Conv3d(h, layer.weight, layer.bias, layer.spec);
    if (!layer.normalized) continue;
    ad::RunningStats<T>* stats = nullptr;
    if (mode == ad::BatchNormMode::kEval) {
      stats = &(*scratch)[i];
    } else if (update_stats) {
      stats = const_cast<ad::RunningStats<T>*>(&layer.stats);
    }
    h = ad::BatchNorm3d(h, layer.gamma, layer.beta, static_cast<T>(options_.bn_eps), mode, stats);
    h = ad::LeakyRelu(h, static_cast<T>(options_.leaky_slope));
  }
  return h;
}

template <typename T>
Var<T> ConvStack<T>::Forward(const Var<T>& x, ad::BatchNormMode mode) const {
  std::vector<ad::RunningStats<T>> scratch;
  if (mode == ad::BatchNormMode::kEval) {
    for (const auto& layer : layers_) scratch.push_back(layer.stats);
  }
  return Run(x, mode, false, &scratch);
}

template <typename T>
Var<T> ConvStack<T>::ForwardTraining(const Var<T>& x) {
  return Run(x, ad::BatchNormMode::kTrain, true, nullptr);
}

template <typename T>
std::vector<Var<T>> ConvStack<T>::Parameters() const {
  std::vector<Var<T>> params;
  for (const auto& layer : layers_) {
    params.push_back(layer.weight);
    params.push_back(layer.bias);
    if (layer.normalized) {
      params.push_back(layer.gamma);
      params.push_back(layer.beta);
    }
  }
  return params;
}

template <typename T>
int64_t ConvStack<T>::ReceptiveField(int axis) const {
  int64_t rf = 1;
  for (const auto& layer : layers_) rf += layer.spec.kernel[axis] - 1;
  return rf;
}

template class ConvStack<float>;
template class ConvStack<double>;

namespace {

ConvStack<float>::Options StackOptions(const TrainConfig& c) {
  ConvStack<float>::Options o;
  o.kernel = {c.kernel_size, c.kernel_size, c.kernel_size};
  o.padding = c.padding;
  o.init_std = c.init_std;
  o.leaky_slope = c.leaky_slope;
  o.bn_eps = c.bn_eps;
  return o;
}

std::vector<int64_t> StackChannels(int layers, int64_t width, int64_t out) {
  std::vector<int64_t> ch{VideoClip::kChannels};
  for (int i = 0; i + 1 < layers; ++i) ch.push_back(width);
  ch.push_back(out);
  return ch;
}

void CheckGeneratorInputs(const ScaleModel& model, const Var<float>& noise, const Var<float>& prev_up) {
  if (model.scale_index == 0 && prev_up.defined()) {
    throw DimensionError("generator_forward: scale 0 takes noise only");
  }
  if (model.scale_index > 0 && !prev_up.defined()) {
    throw DimensionError(fmt::format("generator_forward: scale {} needs the upsampled coarser video",
                                     model.scale_index));
  }
  if (prev_up.defined() && prev_up.shape() != noise.shape()) {
    throw DimensionError(fmt::format("generator_forward: noise {} and upsampled video {} differ in shape",
                                     noise.shape().ToString(), prev_up.shape().ToString()));
  }
}

template <typename Trunk>
Var<float> GeneratorImpl(const ScaleModel& model, const Var<float>& noise, const Var<float>& prev_up,
                         Trunk trunk) {
  CheckGeneratorInputs(model, noise, prev_up);
  if (!prev_up.defined()) return ad::Tanh(trunk(noise));
  Var<float> in = ad::Add(ad::Scale(noise, model.noise_amp), prev_up);
  return ad::Add(ad::Tanh(trunk(in)), prev_up);
}

}  // namespace

ScaleModel InitScaleModel(int scale_index, const TrainConfig& config, uint64_t seed) {
  ScaleModel model;
  model.scale_index = scale_index;
  const auto options = StackOptions(config);
  Rng g_rng(Rng::Derive(seed, 2 * static_cast<uint64_t>(scale_index)));
  Rng d_rng(Rng::Derive(seed, 2 * static_cast<uint64_t>(scale_index) + 1));
  model.generator = Generator(StackChannels(config.gen_layers, config.hidden_channels, VideoClip::kChannels),
                              options, g_rng);
  model.discriminator = Discriminator(StackChannels(config.disc_layers, config.hidden_channels, 1), options, d_rng);
  return model;
}

Var<float> GeneratorForward(const ScaleModel& model, const Var<float>& noise, const Var<float>& prev_up) {
  return GeneratorImpl(model, noise, prev_up,
                       [&](const Var<float>& x) { return model.generator.Forward(x); });
}

Var<float> GeneratorForwardTraining(ScaleModel& model, const Var<float>& noise, const Var<float>& prev_up) {
  return GeneratorImpl(model, noise, prev_up,
                       [&](const Var<float>& x) { return model.generator.ForwardTraining(x); });
}

Var<float> DiscriminatorPatchMap(const ScaleModel& model, const Var<float>& clip, ad::BatchNormMode mode) {
  if (clip.shape().channels() != VideoClip::kChannels) {
    throw DimensionError(fmt::format("discriminator: expected 3 channels, got clip {}", clip.shape().ToString()));
  }
  return model.discriminator.Forward(clip, mode);
}

Var<float> DiscriminatorForward(const ScaleModel& model, const Var<float>& clip, ad::BatchNormMode mode) {
  return ad::MeanAll(DiscriminatorPatchMap(model, clip, mode));
}

Shape NoiseShape(const SpatialDims& dims, int64_t frames) {
  return Shape(1, VideoClip::kChannels, frames, dims.height, dims.width);
}

Tensor<float> SampleChain(const std::vector<ScaleModel>& scales, int last, int64_t frames, Rng& rng,
                          const std::vector<SpatialDims>* dims_override) {
  if (last < 0 || last >= static_cast<int>(scales.size())) {
    throw std::out_of_range(fmt::format("sample chain to scale {} of {}", last, scales.size()));
  }
  ad::NoGradGuard no_grad;
  Var<float> x;
  for (int n = 0; n <= last; ++n) {
    const SpatialDims dims = dims_override ? (*dims_override)[n] : scales[n].dims;
    Var<float> noise = Var<float>::Leaf(rng.NormalTensor<float>(NoiseShape(dims, frames)));
    Var<float> up;
    if (n > 0) up = ad::UpsampleSpatial(x, dims.height, dims.width);
    x = GeneratorForward(scales[n], noise, up);
  }
  return x.value();
}

Tensor<float> ReconstructionChain(const std::vector<ScaleModel>& scales, int last) {
  if (last < 0 || last >= static_cast<int>(scales.size())) {
    throw std::out_of_range(fmt::format("reconstruction chain to scale {} of {}", last, scales.size()));
  }
  if (scales.front().rec_noise.empty()) {
    throw DataError("reconstruction needs the recorded scale-0 noise, which this model lacks");
  }
  ad::NoGradGuard no_grad;
  Var<float> x = GeneratorForward(scales[0], Var<float>::Leaf(scales[0].rec_noise), Var<float>());
  for (int n = 1; n <= last; ++n) {
    Var<float> up = ad::UpsampleSpatial(x, scales[n].dims.height, scales[n].dims.width);
    x = GeneratorForward(scales[n], Var<float>::Leaf(Tensor<float>(up.shape())), up);
  }
  return x.value();
}

uint64_t ParameterHash(const ScaleModel& model) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const ConvStack<float>* stack : {&model.generator, &model.discriminator}) {
    for (const auto& p : stack->Parameters()) mix(p.value().data(), sizeof(float) * p.value().numel());
    for (const auto& layer : stack->layers()) {
      mix(layer.stats.mean.data(), sizeof(float) * layer.stats.mean.size());
      mix(layer.stats.var.data(), sizeof(float) * layer.stats.var.size());
    }
  }
  mix(model.rec_noise.data(), sizeof(float) * model.rec_noise.numel());
  mix(&model.noise_amp, sizeof(float));
  return h;
}

}  // namespace vidtex
