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

#ifndef VIDTEX_RNG_H_
#define VIDTEX_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "vidtex/tensor.h"

namespace vidtex {

/// Seeded generator with a platform-independent output stream.
///
/// std::mt19937_64 is fully specified by the standard; the standard
/// distributions are not, so uniform and normal variates are derived here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(Mix(seed)) {}

  uint64_t NextU64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  /// Standard normal via Box-Muller.
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  Tensor<T> NormalTensor(const Shape& shape, double stddev = 1.0) {
    Tensor<T> out(shape);
    for (int64_t i = 0; i < out.numel(); ++i) out[i] = static_cast<T>(stddev * Normal());
    return out;
  }

  template <typename T>
  Tensor<T> UniformTensor(const Shape& shape, double lo, double hi) {
    Tensor<T> out(shape);
    for (int64_t i = 0; i < out.numel(); ++i) out[i] = static_cast<T>(Uniform(lo, hi));
    return out;
  }

  /// Independent stream for a named sub-task, derived from a base seed.
  static uint64_t Derive(uint64_t seed, uint64_t stream) {
    return Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL));
  }

 private:
  // splitmix64 finalizer
  static uint64_t Mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vidtex

#endif  // VIDTEX_RNG_H_
