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

#include "vidtex/grad_check.h"

#include <algorithm>
#include <cmath>

namespace vidtex::ad {

namespace {

// Grad mode stays on: `fn` may itself take gradients (penalty terms). The
// probe leaf does not require a gradient, so nothing is recorded for it.
double Evaluate(const ScalarFn& fn, const Tensor<double>& x) {
  Var<double> out = fn(Var<double>::Leaf(x));
  if (out.value().numel() != 1) {
    throw DimensionError("grad_check: function must return a scalar, got shape " +
                         out.shape().ToString());
  }
  return out.value()[0];
}

}  // namespace

GradCheckResult GradCheck(const ScalarFn& fn, const Tensor<double>& point, double step,
                          double floor) {
  if (!(step > 0)) throw std::invalid_argument("grad_check: step must be positive");
  Var<double> x = Var<double>::Leaf(point, true);
  Var<double> out = fn(x);
  if (out.value().numel() != 1) {
    throw DimensionError("grad_check: function must return a scalar, got shape " +
                         out.shape().ToString());
  }
  const Tensor<double> analytic = Grad(out, {x})[0].value();

  GradCheckResult result;
  Tensor<double> probe = point;
  for (int64_t i = 0; i < point.numel(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double up = Evaluate(fn, probe);
    probe[i] = orig - step;
    const double down = Evaluate(fn, probe);
    probe[i] = orig;
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), floor});
    const double rel = std::abs(a - numeric) / denom;
    if (rel > result.max_rel_error || result.worst_index < 0) {
      result.max_rel_error = rel;
      result.worst_index = i;
      result.analytic = a;
      result.numeric = numeric;
    }
  }
  return result;
}

}  // namespace vidtex::ad
