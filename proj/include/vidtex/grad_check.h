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

#ifndef VIDTEX_GRAD_CHECK_H_
#define VIDTEX_GRAD_CHECK_H_

#include <functional>

#include "vidtex/autodiff.h"

namespace vidtex::ad {

struct GradCheckResult {
  double max_rel_error = 0.0;
  int64_t worst_index = -1;
  double analytic = 0.0;   // at worst_index
  double numeric = 0.0;    // at worst_index
};

using ScalarFn = std::function<Var<double>(const Var<double>&)>;

/// Compares the reverse-mode gradient of `fn` at `point` with central
/// differences of the given step, coordinate by coordinate. The relative
/// error of a coordinate is |a - n| / max(|a|, |n|, floor).
///
/// Throws DimensionError when `fn` does not return a single element.
GradCheckResult GradCheck(const ScalarFn& fn, const Tensor<double>& point, double step,
                          double floor = 1e-8);

}  // namespace vidtex::ad

#endif  // VIDTEX_GRAD_CHECK_H_
