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

// Test-only reference implementations. Nothing here shares code with the
// library paths they check.

#ifndef VIDTEX_TESTS_ORACLES_H_
#define VIDTEX_TESTS_ORACLES_H_

#include <array>
#include <cmath>
#include <vector>

#include "vidtex/rng.h"
#include "vidtex/tensor.h"

namespace vidtex::testing {

/// Direct nested-loop stride-1 convolution with zero padding, in double.
inline Tensor<double> DirectConv3d(const Tensor<double>& x, const Tensor<double>& w,
                                   const std::vector<double>& bias,
                                   const std::array<int64_t, 3>& pad) {
  const Shape& xs = x.shape();
  const Shape& ws = w.shape();
  const int64_t to = xs[2] + 2 * pad[0] - ws[2] + 1;
  const int64_t ho = xs[3] + 2 * pad[1] - ws[3] + 1;
  const int64_t wo = xs[4] + 2 * pad[2] - ws[4] + 1;
  Tensor<double> y(Shape(xs[0], ws[0], to, ho, wo));
  for (int64_t n = 0; n < xs[0]; ++n)
    for (int64_t co = 0; co < ws[0]; ++co)
      for (int64_t t = 0; t < to; ++t)
        for (int64_t h = 0; h < ho; ++h)
          for (int64_t v = 0; v < wo; ++v) {
            double acc = bias.empty() ? 0.0 : bias[co];
            for (int64_t ci = 0; ci < ws[1]; ++ci)
              for (int64_t a = 0; a < ws[2]; ++a)
                for (int64_t b = 0; b < ws[3]; ++b)
                  for (int64_t c = 0; c < ws[4]; ++c) {
                    const int64_t ti = t + a - pad[0], hi = h + b - pad[1], wi = v + c - pad[2];
                    if (ti < 0 || ti >= xs[2] || hi < 0 || hi >= xs[3] || wi < 0 || wi >= xs[4]) continue;
                    acc += w.at(co, ci, a, b, c) * x.at(n, ci, ti, hi, wi);
                  }
            y.at(n, co, t, h, v) = acc;
          }
  return y;
}

/// Non-overlapping k x k average pooling of every frame.
inline Tensor<double> AveragePool(const Tensor<double>& x, int64_t k) {
  const Shape& s = x.shape();
  Tensor<double> y(Shape(s[0], s[1], s[2], s[3] / k, s[4] / k));
  for (int64_t n = 0; n < s[0]; ++n)
    for (int64_t c = 0; c < s[1]; ++c)
      for (int64_t t = 0; t < s[2]; ++t)
        for (int64_t h = 0; h < s[3] / k; ++h)
          for (int64_t w = 0; w < s[4] / k; ++w) {
            double acc = 0;
            for (int64_t i = 0; i < k; ++i)
              for (int64_t j = 0; j < k; ++j) acc += x.at(n, c, t, h * k + i, w * k + j);
            y.at(n, c, t, h, w) = acc / static_cast<double>(k * k);
          }
  return y;
}

/// Random shape with every axis in [1, max].
inline Shape RandomShape(Rng& rng, const Shape& max) {
  Shape s;
  for (int i = 0; i < 5; ++i) {
    s.dims[i] = 1 + static_cast<int64_t>(rng.NextU64() % static_cast<uint64_t>(max[i]));
  }
  return s;
}

inline double MaxAbsDiff(const Tensor<double>& a, const Tensor<double>& b) {
  double m = 0;
  for (int64_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace vidtex::testing

#endif  // VIDTEX_TESTS_ORACLES_H_
