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

// WGAN-GP critic objective, generator objective and reconstruction loss.
//
// The critic minimizes D(fake) - D(real) + lambda * (|grad D(x_hat)| - 1)^2
// and the generator minimizes -D(fake) + eta * mse(rec, target).

#ifndef VIDTEX_LOSSES_H_
#define VIDTEX_LOSSES_H_

#include <cmath>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "vidtex/autodiff.h"
#include "vidtex/error.h"
#include "vidtex/nn_ops.h"
#include "vidtex/rng.h"

namespace vidtex {

/// Penalty on the critic's input-gradient norm at x_hat = alpha * real +
/// (1 - alpha) * fake. `critic` maps a Var<T> clip to a scalar Var<T>.
///
/// x_hat is a fresh leaf, so nothing flows back into `real` or `fake`. The
/// result is differentiable wrt the critic's parameters (second order).
template <typename T, typename Critic>
ad::Var<T> GradientPenalty(Critic&& critic, const ad::Var<T>& real, const ad::Var<T>& fake, T lambda,
                           T alpha) {
  if (real.shape() != fake.shape()) {
    throw DimensionError(fmt::format("gradient_penalty: real {} and fake {} differ in shape",
                                     real.shape().ToString(), fake.shape().ToString()));
  }
  if (!(alpha >= T(0) && alpha <= T(1))) {
    throw std::invalid_argument(fmt::format("gradient_penalty: alpha must be in [0, 1], got {}", alpha));
  }
  Tensor<T> mixed(real.shape());
  const T* r = real.value().data();
  const T* f = fake.value().data();
  T* m = mixed.data();
  for (int64_t i = 0; i < mixed.numel(); ++i) m[i] = alpha * r[i] + (T(1) - alpha) * f[i];
  ad::Var<T> x_hat = ad::Var<T>::Leaf(std::move(mixed), true);

  ad::Var<T> score = critic(x_hat);
  ad::Var<T> grad = ad::Grad(score, {x_hat}, /*create_graph=*/true)[0];
  ad::Var<T> norm = ad::Sqrt(ad::SumAll(ad::Square(grad)));
  return ad::Scale(ad::Square(ad::AddScalar(norm, T(-1))), lambda);
}

/// As above with alpha ~ U(0, 1) drawn from `rng`.
template <typename T, typename Critic>
ad::Var<T> GradientPenalty(Critic&& critic, const ad::Var<T>& real, const ad::Var<T>& fake, T lambda,
                           Rng& rng) {
  return GradientPenalty(std::forward<Critic>(critic), real, fake, lambda, static_cast<T>(rng.Uniform()));
}

template <typename T>
ad::Var<T> DiscriminatorLoss(const ad::Var<T>& score_real, const ad::Var<T>& score_fake,
                             const ad::Var<T>& gp) {
  return ad::Add(ad::Sub(score_fake, score_real), gp);
}

/// Mean squared error; shapes must match.
template <typename T>
ad::Var<T> ReconstructionLoss(const ad::Var<T>& generated, const ad::Var<T>& target) {
  if (generated.shape() != target.shape()) {
    throw DimensionError(fmt::format("reconstruction_loss: generated {} and target {} differ in shape",
                                     generated.shape().ToString(), target.shape().ToString()));
  }
  return ad::MeanSquaredError(generated, target);
}

template <typename T>
ad::Var<T> GeneratorLoss(const ad::Var<T>& score_fake, const ad::Var<T>& rec, T eta) {
  return ad::Add(ad::Scale(score_fake, T(-1)), ad::Scale(rec, eta));
}

/// Loss breakdown of one training iteration. d_loss and gp_term come from the
/// last critic step, the rest from the last generator step.
struct LossReport {
  double d_loss = 0;
  double g_adv_loss = 0;
  double rec_loss = 0;
  double gp_term = 0;
  double total = 0;  // g_adv_loss + eta * rec_loss

  bool AllFinite() const {
    return std::isfinite(d_loss) && std::isfinite(g_adv_loss) && std::isfinite(rec_loss) &&
           std::isfinite(gp_term) && std::isfinite(total);
  }
  std::string ToString() const {
    return fmt::format("d_loss={:.6g} g_adv={:.6g} rec={:.6g} gp={:.6g} total={:.6g}", d_loss, g_adv_loss,
                       rec_loss, gp_term, total);
  }
};

}  // namespace vidtex

#endif  // VIDTEX_LOSSES_H_
