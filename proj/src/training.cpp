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

#include "vidtex/training.h"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "vidtex/error.h"

namespace vidtex {

using ad::Var;

namespace {

bool IsUpdateStep(int64_t step, const TrainConfig& config) {
  return step > 0 && config.update_period != kNeverUpdate && step % config.update_period == 0;
}

double ToDouble(const Var<float>& v) { return static_cast<double>(v.value().item()); }

void RequireFinite(double value, std::string_view what, int64_t step, int scale, const LossReport& so_far) {
  if (std::isfinite(value)) return;
  throw NumericError(fmt::format("non-finite {} at scale {} step {} ({})", what, scale, step, so_far.ToString()));
}

}  // namespace

ClipCursor NextClip(const ClipCursor& cursor, int64_t step, const TrainConfig& config) {
  if (!IsUpdateStep(step, config)) return cursor;
  ClipCursor next = cursor;
  next.start_frame += config.update_stride;
  if (next.start_frame + config.clip_len > next.source_len) next.start_frame = 0;
  return next;
}

int64_t ClipStartAt(int64_t step, const TrainConfig& config, int64_t source_len) {
  if (source_len < config.clip_len) {
    throw DimensionError(fmt::format("source has {} frames, fewer than clip_len {}", source_len, config.clip_len));
  }
  if (step <= 0 || config.update_period == kNeverUpdate) return 0;
  const int64_t updates = step / config.update_period;
  const int64_t windows = (source_len - config.clip_len) / config.update_stride + 1;
  return (updates % windows) * config.update_stride;
}

Adam::Adam(std::vector<Var<float>> params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const auto& p : params_) {
    m_.emplace_back(static_cast<size_t>(p.value().numel()), 0.0);
    v_.emplace_back(static_cast<size_t>(p.value().numel()), 0.0);
  }
}

void Adam::Step() {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    const Tensor<float>* g = params_[i].grad();
    if (g == nullptr) continue;
    Tensor<float>& w = params_[i].mutable_value();
    auto& m = m_[i];
    auto& v = v_[i];
    for (int64_t k = 0; k < w.numel(); ++k) {
      const double gk = (*g)[k];
      m[k] = beta1_ * m[k] + (1.0 - beta1_) * gk;
      v[k] = beta2_ * v[k] + (1.0 - beta2_) * gk * gk;
      const double step = lr_ * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps_);
      w[k] = static_cast<float>(w[k] - step);
    }
  }
}

void Adam::ZeroGrad() {
  for (auto& p : params_) p.zero_grad();
}

TrainingData PrepareTrainingData(const VideoClip& video, const TrainConfig& config) {
  if (video.frames() < config.clip_len) {
    throw DimensionError(fmt::format("source video has {} frames, fewer than clip_len {}", video.frames(),
                                     config.clip_len));
  }
  TrainingData data;
  data.schedule = config.num_scales == 1
                      ? ScaleSchedule::Single(SpatialDims{config.finest, config.finest})
                      : BuildScaleSchedule(config.coarsest, config.finest, config.num_scales);
  data.levels = BuildTrainingPyramid(video, data.schedule);
  for (const auto& level : data.levels) data.rec_targets.push_back(level.Slice(0, config.clip_len));
  data.source_len = video.frames();
  return data;
}

std::string LogHeader() { return "step\tscale\td_loss\tg_adv\trec\tgp"; }

std::string FormatLogLine(const TrainLogEntry& e) {
  return fmt::format("{}\t{}\t{:.9g}\t{:.9g}\t{:.9g}\t{:.9g}", e.step, e.scale, e.report.d_loss,
                     e.report.g_adv_loss, e.report.rec_loss, e.report.gp_term);
}

double ReconstructionError(const std::vector<ScaleModel>& scales, int last, const VideoClip& target) {
  const Tensor<float> rec = ReconstructionChain(scales, last);
  if (rec.shape() != target.shape()) {
    throw DimensionError(fmt::format("reconstruction {} vs target {}", rec.shape().ToString(),
                                     target.shape().ToString()));
  }
  ad::NoGradGuard no_grad;
  return ToDouble(ad::MeanSquaredError(Var<float>::Constant(rec), Var<float>::Constant(target.tensor())));
}

ScaleModel TrainScale(const std::vector<ScaleModel>& frozen, int n, const TrainingData& data,
                      const TrainConfig& config, const TrainLogger& log) {
  if (n != static_cast<int>(frozen.size())) {
    throw std::invalid_argument(fmt::format("train_scale {} needs exactly {} frozen scales, got {}", n, n,
                                            frozen.size()));
  }
  if (n >= data.schedule.num_scales()) {
    throw std::out_of_range(fmt::format("scale {} outside a {}-level schedule", n, data.schedule.num_scales()));
  }
  const SpatialDims dims = data.schedule.dims[n];
  const int64_t frames = config.clip_len;
  const Shape noise_shape = NoiseShape(dims, frames);
  const Var<float> rec_target = Var<float>::Constant(data.rec_targets[n].tensor());

  ScaleModel model = InitScaleModel(n, config, config.seed);
  model.dims = dims;
  Rng rng(Rng::Derive(config.seed, 0x100 + static_cast<uint64_t>(n)));

  // Fixed input of the reconstruction path at this scale.
  Var<float> rec_up;
  Var<float> rec_noise;
  if (n == 0) {
    model.rec_noise = rng.NormalTensor<float>(noise_shape);
    model.noise_amp = 1.0f;
    rec_noise = Var<float>::Constant(model.rec_noise);
  } else {
    const Tensor<float> prev = ReconstructionChain(frozen, n - 1);
    {
      ad::NoGradGuard no_grad;
      rec_up = ad::UpsampleSpatial(Var<float>::Constant(prev), dims.height, dims.width).detach();
      model.noise_amp = static_cast<float>(std::sqrt(ToDouble(ad::MeanSquaredError(rec_up, rec_target))));
    }
    rec_noise = Var<float>::Constant(Tensor<float>(noise_shape));
  }

  std::vector<uint64_t> frozen_hashes;
  if (config.debug_freeze_check) {
    for (const auto& s : frozen) frozen_hashes.push_back(ParameterHash(s));
  }

  Adam opt_g(model.generator.Parameters(), config.lr_g, config.adam_beta1, config.adam_beta2);
  Adam opt_d(model.discriminator.Parameters(), config.lr_d, config.adam_beta1, config.adam_beta2);
  const auto decay_step = static_cast<int64_t>(std::floor(config.lr_decay_at * config.steps_per_scale));
  auto critic = [&model](const Var<float>& x) { return DiscriminatorForward(model, x); };

  ClipCursor cursor{0, data.source_len};
  for (int64_t step = 0; step < config.steps_per_scale; ++step) {
    cursor = NextClip(cursor, step, config);
    if (step == decay_step) {
      opt_g.set_lr(config.lr_g * config.lr_decay_factor);
      opt_d.set_lr(config.lr_d * config.lr_decay_factor);
    }
    const Var<float> real = Var<float>::Constant(data.levels[n].Slice(cursor.start_frame, frames).tensor());
    Var<float> up;
    if (n > 0) {
      const Tensor<float> coarse = SampleChain(frozen, n - 1, frames, rng);
      ad::NoGradGuard no_grad;
      up = ad::UpsampleSpatial(Var<float>::Constant(coarse), dims.height, dims.width).detach();
    }

    LossReport report;
    for (int j = 0; j < config.d_steps; ++j) {
      Var<float> fake;
      {
        ad::NoGradGuard no_grad;
        fake = GeneratorForward(model, Var<float>::Leaf(rng.NormalTensor<float>(noise_shape)), up).detach();
      }
      opt_d.ZeroGrad();
      const Var<float> d_real = ad::MeanAll(model.discriminator.ForwardTraining(real));
      const Var<float> d_fake = DiscriminatorForward(model, fake);
      const Var<float> gp = GradientPenalty(critic, real, fake, static_cast<float>(config.lambda_gp), rng);
      const Var<float> d_loss = DiscriminatorLoss(d_real, d_fake, gp);
      report.d_loss = ToDouble(d_loss);
      report.gp_term = ToDouble(gp);
      RequireFinite(report.d_loss, "critic loss", step, n, report);
      ad::Backward(d_loss);
      opt_d.Step();
    }
    for (int j = 0; j < config.g_steps; ++j) {
      opt_g.ZeroGrad();
      const Var<float> fake =
          GeneratorForwardTraining(model, Var<float>::Leaf(rng.NormalTensor<float>(noise_shape)), up);
      const Var<float> d_fake = DiscriminatorForward(model, fake);
      const Var<float> rec = ReconstructionLoss(GeneratorForward(model, rec_noise, rec_up), rec_target);
      const Var<float> g_loss = GeneratorLoss(d_fake, rec, static_cast<float>(config.eta));
      report.g_adv_loss = -ToDouble(d_fake);
      report.rec_loss = ToDouble(rec);
      report.total = ToDouble(g_loss);
      RequireFinite(report.total, "generator loss", step, n, report);
      ad::Backward(g_loss);
      opt_g.Step();
    }
    opt_d.ZeroGrad();
    if (!report.AllFinite()) {
      throw NumericError(fmt::format("non-finite loss at scale {} step {} ({})", n, step, report.ToString()));
    }
    if (config.debug_freeze_check) {
      for (size_t i = 0; i < frozen.size(); ++i) {
        if (ParameterHash(frozen[i]) != frozen_hashes[i]) {
          throw std::logic_error(fmt::format("frozen scale {} changed while training scale {} (step {})", i, n,
                                             step));
        }
      }
    }
    if (log) log(TrainLogEntry{step, n, report, cursor.start_frame});
  }
  opt_g.ZeroGrad();

  std::vector<ScaleModel> chain = frozen;
  chain.push_back(model);
  model.final_rec_loss = static_cast<float>(ReconstructionError(chain, n, data.rec_targets[n]));
  return model;
}

PyramidModel TrainPyramid(const VideoClip& video, const TrainConfig& config, const TrainLogger& log) {
  config.Validate();
  const TrainingData data = PrepareTrainingData(video, config);
  PyramidModel out;
  out.config = config;
  out.schedule = data.schedule;
  out.frames = config.clip_len;
  for (int n = 0; n < data.schedule.num_scales(); ++n) {
    out.scales.push_back(TrainScale(out.scales, n, data, config, log));
  }
  return out;
}

}  // namespace vidtex
