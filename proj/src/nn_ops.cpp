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

#include "vidtex/nn_ops.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <Eigen/Core>
#include <fmt/format.h>

namespace vidtex::ad {

ConvSpec ConvSpec::Same(int64_t in_channels, int64_t out_channels,
                        std::array<int64_t, 3> kernel, PaddingMode mode) {
  ConvSpec spec;
  spec.kernel = kernel;
  for (int i = 0; i < 3; ++i) spec.padding[i] = (kernel[i] - 1) / 2;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.padding_mode = mode;
  return spec;
}

Shape ConvSpec::OutputShape(const Shape& input) const {
  Shape out = input;
  out.dims[1] = out_channels;
  for (int i = 0; i < 3; ++i) {
    out.dims[2 + i] = input[2 + i] + 2 * padding[i] - kernel[i] + 1;
  }
  return out;
}

namespace {

struct ConvGeom {
  int64_t batch, cin, cout;
  int64_t kt, kh, kw;
  int64_t pt, ph, pw;
  int64_t ti, hi, wi;
  int64_t to, ho, wo;

  int64_t taps() const { return kt * kh * kw; }
  int64_t in_volume() const { return ti * hi * wi; }
  int64_t out_volume() const { return to * ho * wo; }
};

ConvGeom MakeGeom(const Shape& input, const Shape& weight, const std::array<int64_t, 3>& pad) {
  if (input.channels() != weight[1]) {
    throw DimensionError(fmt::format("conv3d: input has {} channels, weight {} expects {}",
                                     input.channels(), weight.ToString(), weight[1]));
  }
  ConvGeom g{};
  g.batch = input.batch();
  g.cin = weight[1];
  g.cout = weight[0];
  g.kt = weight[2];
  g.kh = weight[3];
  g.kw = weight[4];
  g.pt = pad[0];
  g.ph = pad[1];
  g.pw = pad[2];
  g.ti = input.frames();
  g.hi = input.height();
  g.wi = input.width();
  g.to = g.ti + 2 * g.pt - g.kt + 1;
  g.ho = g.hi + 2 * g.ph - g.kh + 1;
  g.wo = g.wi + 2 * g.pw - g.kw + 1;
  if (g.to < 1 || g.ho < 1 || g.wo < 1) {
    throw DimensionError(fmt::format("conv3d: kernel {} with padding ({},{},{}) does not fit input {}",
                                     weight.ToString(), g.pt, g.ph, g.pw, input.ToString()));
  }
  return g;
}

Shape OutShape(const ConvGeom& g) { return Shape(g.batch, g.cout, g.to, g.ho, g.wo); }
Shape InShape(const ConvGeom& g) { return Shape(g.batch, g.cin, g.ti, g.hi, g.wi); }

// Output rows [r0, r1), where row r is (t, h) = (r / ho, r % ho), form one
// tile of the column matrix, which keeps the im2col buffer near cache size.
struct RowTile {
  int64_t r0, r1;
  int64_t columns(const ConvGeom& g) const { return (r1 - r0) * g.wo; }
  int64_t offset(const ConvGeom& g) const { return r0 * g.wo; }
};

int64_t TileRows(const ConvGeom& g) {
  constexpr int64_t kTargetElems = int64_t{1} << 16;
  const int64_t per_row = g.cin * g.taps() * g.wo;
  return std::clamp<int64_t>(kTargetElems / std::max<int64_t>(per_row, 1), 1, g.to * g.ho);
}

// Visits every (row of the column tile, output row (t, h)) pair with the
// source row pointer and the output w-range [w0, w1) that lands inside the
// input. `inside` is false when the whole output row reads padding.
template <typename F>
void ForEachColumnRow(const ConvGeom& g, const RowTile& tile, F f) {
  const int64_t cols = tile.columns(g);
  int64_t row = 0;
  for (int64_t ci = 0; ci < g.cin; ++ci) {
    for (int64_t a = 0; a < g.kt; ++a) {
      for (int64_t b = 0; b < g.kh; ++b) {
        for (int64_t c = 0; c < g.kw; ++c, ++row) {
          const int64_t w0 = std::clamp<int64_t>(g.pw - c, 0, g.wo);
          const int64_t w1 = std::clamp<int64_t>(g.wi - c + g.pw, w0, g.wo);
          for (int64_t r = tile.r0; r < tile.r1; ++r) {
            const int64_t tsrc = r / g.ho + a - g.pt;
            const int64_t hsrc = r % g.ho + b - g.ph;
            const int64_t col_offset = row * cols + (r - tile.r0) * g.wo;
            if (tsrc < 0 || tsrc >= g.ti || hsrc < 0 || hsrc >= g.hi) {
              f(col_offset, false, int64_t{0}, w0, w0);
            } else {
              // input offset of output column w is src_offset + w
              const int64_t src_offset = ((ci * g.ti + tsrc) * g.hi + hsrc) * g.wi + c - g.pw;
              f(col_offset, true, src_offset, w0, w1);
            }
          }
        }
      }
    }
  }
}

template <typename T>
void Im2Col(const T* x, const ConvGeom& g, const RowTile& tile, T* col) {
  ForEachColumnRow(g, tile, [&](int64_t col_off, bool inside, int64_t src_off, int64_t w0, int64_t w1) {
    T* dst = col + col_off;
    std::fill(dst, dst + w0, T(0));
    if (inside) std::memcpy(dst + w0, x + src_off + w0, sizeof(T) * (w1 - w0));
    std::fill(dst + w1, dst + g.wo, T(0));
  });
}

template <typename T>
void Col2Im(const T* col, const ConvGeom& g, const RowTile& tile, T* x) {
  ForEachColumnRow(g, tile, [&](int64_t col_off, bool inside, int64_t src_off, int64_t w0, int64_t w1) {
    if (!inside) return;
    const T* s = col + col_off;
    T* d = x + src_off;
    for (int64_t w = w0; w < w1; ++w) d[w] += s[w];
  });
}

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;
// Rows are channels of a (C, T, H, W) block; a tile covers a frame range.
template <typename T>
using TileMap = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstTileMap = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;

template <typename F>
void ForEachTile(const ConvGeom& g, F f) {
  const int64_t step = TileRows(g);
  const int64_t rows = g.to * g.ho;
  for (int64_t n = 0; n < g.batch; ++n) {
    for (int64_t r0 = 0; r0 < rows; r0 += step) f(n, RowTile{r0, std::min(rows, r0 + step)});
  }
}

template <typename T>
Tensor<T> CorrelateKernel(const Tensor<T>& x, const Tensor<T>& w, const ConvGeom& g) {
  Tensor<T> y(OutShape(g));
  const int64_t k = g.cin * g.taps();
  std::vector<T> col(static_cast<size_t>(k * TileRows(g) * g.wo));
  ConstMapMat<T> wm(w.data(), g.cout, k);
  ForEachTile(g, [&](int64_t n, const RowTile& tile) {
    Im2Col(x.data() + n * g.cin * g.in_volume(), g, tile, col.data());
    ConstMapMat<T> cm(col.data(), k, tile.columns(g));
    TileMap<T> ym(y.data() + n * g.cout * g.out_volume() + tile.offset(g), g.cout, tile.columns(g),
                  Eigen::OuterStride<>(g.out_volume()));
    ym.noalias() = wm * cm;
  });
  return y;
}

template <typename T>
Tensor<T> InputGradKernel(const Tensor<T>& gy, const Tensor<T>& w, const ConvGeom& g) {
  Tensor<T> gx(InShape(g));
  const int64_t k = g.cin * g.taps();
  std::vector<T> col(static_cast<size_t>(k * TileRows(g) * g.wo));
  ConstMapMat<T> wm(w.data(), g.cout, k);
  ForEachTile(g, [&](int64_t n, const RowTile& tile) {
    ConstTileMap<T> gm(gy.data() + n * g.cout * g.out_volume() + tile.offset(g), g.cout,
                       tile.columns(g), Eigen::OuterStride<>(g.out_volume()));
    MapMat<T> cm(col.data(), k, tile.columns(g));
    cm.noalias() = wm.transpose() * gm;
    Col2Im(col.data(), g, tile, gx.data() + n * g.cin * g.in_volume());
  });
  return gx;
}

template <typename T>
Tensor<T> WeightGradKernel(const Tensor<T>& x, const Tensor<T>& gy, const ConvGeom& g) {
  Tensor<T> gw(Shape(g.cout, g.cin, g.kt, g.kh, g.kw));
  const int64_t k = g.cin * g.taps();
  std::vector<T> col(static_cast<size_t>(k * TileRows(g) * g.wo));
  MapMat<T> wm(gw.data(), g.cout, k);
  ForEachTile(g, [&](int64_t n, const RowTile& tile) {
    Im2Col(x.data() + n * g.cin * g.in_volume(), g, tile, col.data());
    ConstMapMat<T> cm(col.data(), k, tile.columns(g));
    ConstTileMap<T> gm(gy.data() + n * g.cout * g.out_volume() + tile.offset(g), g.cout,
                       tile.columns(g), Eigen::OuterStride<>(g.out_volume()));
    wm.noalias() += gm * cm.transpose();
  });
  return gw;
}

int64_t ReflectIndex(int64_t i, int64_t n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * (n - 1) - i;
  return i;
}

template <typename T, bool kAdjoint>
void ReflectKernel(const Shape& small, const std::array<int64_t, 3>& pad, const T* src, T* dst) {
  // Forward gathers padded <- small; the adjoint scatters small += padded.
  const int64_t tp = small.frames() + 2 * pad[0];
  const int64_t hp = small.height() + 2 * pad[1];
  const int64_t wp = small.width() + 2 * pad[2];
  const int64_t planes = small.batch() * small.channels();
  for (int64_t p = 0; p < planes; ++p) {
    for (int64_t t = 0; t < tp; ++t) {
      const int64_t ts = ReflectIndex(t - pad[0], small.frames());
      for (int64_t h = 0; h < hp; ++h) {
        const int64_t hs = ReflectIndex(h - pad[1], small.height());
        for (int64_t w = 0; w < wp; ++w) {
          const int64_t ws = ReflectIndex(w - pad[2], small.width());
          const int64_t si = ((p * small.frames() + ts) * small.height() + hs) * small.width() + ws;
          const int64_t pi = ((p * tp + t) * hp + h) * wp + w;
          if constexpr (kAdjoint) {
            dst[si] += src[pi];
          } else {
            dst[pi] = src[si];
          }
        }
      }
    }
  }
}

template <typename T>
Var<T> ReflectPadAdjoint(const Var<T>& grad, const std::array<int64_t, 3>& pad, const Shape& small) {
  Tensor<T> out(small);
  ReflectKernel<T, true>(small, pad, grad.value().data(), out.data());
  return MakeOp<T>(std::move(out), "ReflectPadAdjoint", {grad},
                   [pad](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{ReflectPad(g, pad)};
                   });
}

template <typename T, bool kAdjoint>
void BilinearKernel(const Shape& small, const Shape& big, const LinearTaps& th,
                    const LinearTaps& tw, const T* src, T* dst) {
  // Forward reads `small` and writes `big`; the adjoint scatters back.
  const int64_t planes = small.batch() * small.channels() * small.frames();
  const int64_t hs = small.height(), ws = small.width();
  const int64_t hb = big.height(), wb = big.width();
  for (int64_t p = 0; p < planes; ++p) {
    const int64_t sbase = p * hs * ws;
    const int64_t bbase = p * hb * wb;
    for (int64_t oh = 0; oh < hb; ++oh) {
      const T fh = static_cast<T>(th.frac[oh]);
      const int64_t r0 = sbase + th.lo[oh] * ws;
      const int64_t r1 = sbase + th.hi[oh] * ws;
      for (int64_t ow = 0; ow < wb; ++ow) {
        const T fw = static_cast<T>(tw.frac[ow]);
        const int64_t c0 = tw.lo[ow], c1 = tw.hi[ow];
        const T w00 = (T(1) - fh) * (T(1) - fw), w01 = (T(1) - fh) * fw;
        const T w10 = fh * (T(1) - fw), w11 = fh * fw;
        const int64_t bi = bbase + oh * wb + ow;
        if constexpr (kAdjoint) {
          const T g = src[bi];
          dst[r0 + c0] += w00 * g;
          dst[r0 + c1] += w01 * g;
          dst[r1 + c0] += w10 * g;
          dst[r1 + c1] += w11 * g;
        } else {
          dst[bi] = w00 * src[r0 + c0] + w01 * src[r0 + c1] + w10 * src[r1 + c0] + w11 * src[r1 + c1];
        }
      }
    }
  }
}

template <typename T>
Var<T> UpsampleAdjoint(const Var<T>& grad, const Shape& small) {
  const Shape& big = grad.shape();
  const LinearTaps th = BilinearTaps(small.height(), big.height());
  const LinearTaps tw = BilinearTaps(small.width(), big.width());
  Tensor<T> out(small);
  BilinearKernel<T, true>(small, big, th, tw, grad.value().data(), out.data());
  return MakeOp<T>(std::move(out), "UpsampleAdjoint", {grad},
                   [big](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{UpsampleSpatial(g, big.height(), big.width())};
                   });
}

}  // namespace

template <typename T>
Var<T> ConvCorrelate(const Var<T>& input, const Var<T>& weight, const std::array<int64_t, 3>& padding) {
  const ConvGeom g = MakeGeom(input.shape(), weight.shape(), padding);
  return MakeOp<T>(CorrelateKernel(input.value(), weight.value(), g), "ConvCorrelate", {input, weight},
                   [padding](const Var<T>& out, const Var<T>& gy, const std::vector<bool>& needs) {
                     const auto& in = out.node()->inputs;
                     return std::vector<Var<T>>{
                         needs[0] ? ConvInputGrad(gy, in[1], padding, in[0].shape()) : Var<T>(),
                         needs[1] ? ConvWeightGrad(in[0], gy, padding, in[1].shape()) : Var<T>()};
                   });
}

template <typename T>
Var<T> ConvInputGrad(const Var<T>& grad_out, const Var<T>& weight,
                     const std::array<int64_t, 3>& padding, const Shape& input_shape) {
  const ConvGeom g = MakeGeom(input_shape, weight.shape(), padding);
  if (grad_out.shape() != OutShape(g)) {
    throw DimensionError(fmt::format("conv3d input-grad: gradient shape {} does not match output {}",
                                     grad_out.shape().ToString(), OutShape(g).ToString()));
  }
  return MakeOp<T>(InputGradKernel(grad_out.value(), weight.value(), g), "ConvInputGrad",
                   {grad_out, weight},
                   [padding](const Var<T>& out, const Var<T>& h, const std::vector<bool>& needs) {
                     const auto& in = out.node()->inputs;
                     return std::vector<Var<T>>{
                         needs[0] ? ConvCorrelate(h, in[1], padding) : Var<T>(),
                         needs[1] ? ConvWeightGrad(h, in[0], padding, in[1].shape()) : Var<T>()};
                   });
}

template <typename T>
Var<T> ConvWeightGrad(const Var<T>& input, const Var<T>& grad_out,
                      const std::array<int64_t, 3>& padding, const Shape& weight_shape) {
  const ConvGeom g = MakeGeom(input.shape(), weight_shape, padding);
  if (grad_out.shape() != OutShape(g)) {
    throw DimensionError(fmt::format("conv3d weight-grad: gradient shape {} does not match output {}",
                                     grad_out.shape().ToString(), OutShape(g).ToString()));
  }
  return MakeOp<T>(WeightGradKernel(input.value(), grad_out.value(), g), "ConvWeightGrad",
                   {input, grad_out},
                   [padding](const Var<T>& out, const Var<T>& hw, const std::vector<bool>& needs) {
                     const auto& in = out.node()->inputs;
                     return std::vector<Var<T>>{
                         needs[0] ? ConvInputGrad(in[1], hw, padding, in[0].shape()) : Var<T>(),
                         needs[1] ? ConvCorrelate(in[0], hw, padding) : Var<T>()};
                   });
}

template <typename T>
Var<T> Conv3d(const Var<T>& input, const Var<T>& weight, const Var<T>& bias, const ConvSpec& spec) {
  if (input.shape().channels() != spec.in_channels) {
    throw DimensionError(fmt::format("conv3d: input {} has {} channels, spec expects {}",
                                     input.shape().ToString(), input.shape().channels(),
                                     spec.in_channels));
  }
  if (weight.shape() != spec.WeightShape()) {
    throw DimensionError(fmt::format("conv3d: weight shape {} does not match spec {}",
                                     weight.shape().ToString(), spec.WeightShape().ToString()));
  }
  if (bias.defined() && bias.shape() != ChannelShape(spec.out_channels)) {
    throw DimensionError(fmt::format("conv3d: bias shape {} should be {}", bias.shape().ToString(),
                                     ChannelShape(spec.out_channels).ToString()));
  }
  if (!input.value().AllFinite()) {
    throw NumericError("conv3d: non-finite value in input " + input.shape().ToString());
  }
  Var<T> y;
  if (spec.padding_mode == PaddingMode::kReflect) {
    y = ConvCorrelate(ReflectPad(input, spec.padding), weight, {0, 0, 0});
  } else {
    y = ConvCorrelate(input, weight, spec.padding);
  }
  if (bias.defined()) y = Add(y, BroadcastTo(bias, y.shape()));
  return y;
}

template <typename T>
Var<T> ReflectPad(const Var<T>& input, const std::array<int64_t, 3>& padding) {
  const Shape small = input.shape();
  for (int i = 0; i < 3; ++i) {
    if (padding[i] < 0 || padding[i] >= small[2 + i]) {
      throw DimensionError(fmt::format("reflect pad {} invalid for axis of size {}", padding[i],
                                       small[2 + i]));
    }
  }
  Shape big = small;
  for (int i = 0; i < 3; ++i) big.dims[2 + i] += 2 * padding[i];
  Tensor<T> out(big);
  ReflectKernel<T, false>(small, padding, input.value().data(), out.data());
  return MakeOp<T>(std::move(out), "ReflectPad", {input},
                   [padding, small](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{ReflectPadAdjoint(g, padding, small)};
                   });
}

LinearTaps BilinearTaps(int64_t in, int64_t out) {
  LinearTaps taps;
  taps.lo.resize(static_cast<size_t>(out));
  taps.hi.resize(static_cast<size_t>(out));
  taps.frac.resize(static_cast<size_t>(out));
  const double ratio = static_cast<double>(in) / static_cast<double>(out);
  for (int64_t o = 0; o < out; ++o) {
    double src = std::max(0.0, (static_cast<double>(o) + 0.5) * ratio - 0.5);
    int64_t lo = std::min(static_cast<int64_t>(std::floor(src)), in - 1);
    int64_t hi = std::min(lo + 1, in - 1);
    taps.lo[o] = lo;
    taps.hi[o] = hi;
    taps.frac[o] = hi == lo ? 0.0 : src - static_cast<double>(lo);
  }
  return taps;
}

template <typename T>
Var<T> UpsampleSpatial(const Var<T>& input, int64_t target_h, int64_t target_w) {
  const Shape small = input.shape();
  if (target_h < small.height() || target_w < small.width()) {
    throw DimensionError(fmt::format("upsample_spatial: target {}x{} is smaller than source {}x{}",
                                     target_h, target_w, small.height(), small.width()));
  }
  if (target_h == small.height() && target_w == small.width()) return input;
  Shape big = small;
  big.dims[3] = target_h;
  big.dims[4] = target_w;
  const LinearTaps th = BilinearTaps(small.height(), target_h);
  const LinearTaps tw = BilinearTaps(small.width(), target_w);
  Tensor<T> out(big);
  BilinearKernel<T, false>(small, big, th, tw, input.value().data(), out.data());
  return MakeOp<T>(std::move(out), "UpsampleSpatial", {input},
                   [small](const Var<T>&, const Var<T>& g, const std::vector<bool>&) {
                     return std::vector<Var<T>>{UpsampleAdjoint(g, small)};
                   });
}

template <typename T>
Var<T> BatchNorm3d(const Var<T>& input, const Var<T>& gamma, const Var<T>& beta, T eps,
                   BatchNormMode mode, std::type_identity_t<RunningStats<T>>* stats) {
  const Shape& shape = input.shape();
  const int64_t channels = shape.channels();
  const Shape cshape = ChannelShape(channels);
  if (gamma.shape() != cshape || beta.shape() != cshape) {
    throw DimensionError(fmt::format("batchnorm3d: gamma {} / beta {} must both be {}",
                                     gamma.shape().ToString(), beta.shape().ToString(),
                                     cshape.ToString()));
  }
  if (!(eps > T(0))) throw std::invalid_argument("batchnorm3d: eps must be positive");

  if (mode == BatchNormMode::kEval) {
    if (stats == nullptr || static_cast<int64_t>(stats->mean.size()) != channels) {
      throw std::invalid_argument("batchnorm3d: eval mode needs running stats for every channel");
    }
    Tensor<T> mean(cshape), inv(cshape);
    for (int64_t c = 0; c < channels; ++c) {
      mean[c] = stats->mean[c];
      inv[c] = T(1) / std::sqrt(stats->var[c] + eps);
    }
    Var<T> xhat = Mul(Sub(input, BroadcastTo(Var<T>::Constant(mean), shape)),
                      BroadcastTo(Var<T>::Constant(inv), shape));
    return Add(Mul(xhat, BroadcastTo(gamma, shape)), BroadcastTo(beta, shape));
  }

  const int64_t count = shape.numel() / channels;
  const T inv_count = T(1) / static_cast<T>(count);
  Var<T> mean = Scale(SumTo(input, cshape), inv_count);
  Var<T> centered = Sub(input, BroadcastTo(mean, shape));
  Var<T> var = Scale(SumTo(Square(centered), cshape), inv_count);
  Var<T> inv_std = PowScalar(AddScalar(var, eps), T(-0.5));
  Var<T> xhat = Mul(centered, BroadcastTo(inv_std, shape));
  Var<T> out = Add(Mul(xhat, BroadcastTo(gamma, shape)), BroadcastTo(beta, shape));

  if (stats != nullptr) {
    if (static_cast<int64_t>(stats->mean.size()) != channels) {
      throw std::invalid_argument("batchnorm3d: running stats channel count mismatch");
    }
    const T unbias = count > 1 ? static_cast<T>(count) / static_cast<T>(count - 1) : T(1);
    const T m = stats->momentum;
    for (int64_t c = 0; c < channels; ++c) {
      stats->mean[c] = (T(1) - m) * stats->mean[c] + m * mean.value()[c];
      stats->var[c] = (T(1) - m) * stats->var[c] + m * var.value()[c] * unbias;
    }
  }
  return out;
}

template <typename T>
Var<T> Activate(const Var<T>& input, const Activation& act) {
  switch (act.kind) {
    case ActivationKind::kLeakyRelu:
      return LeakyRelu(input, static_cast<T>(act.slope));
    case ActivationKind::kTanh:
      return Tanh(input);
  }
  throw std::logic_error("unknown activation");
}

template <typename T>
Var<T> MeanSquaredError(const Var<T>& a, const Var<T>& b) {
  return MeanAll(Square(Sub(a, b)));
}

#define VIDTEX_INSTANTIATE_NN(T)                                                              \
  template Var<T> Conv3d<T>(const Var<T>&, const Var<T>&, const Var<T>&, const ConvSpec&);    \
  template Var<T> ConvCorrelate<T>(const Var<T>&, const Var<T>&, const std::array<int64_t, 3>&); \
  template Var<T> ConvInputGrad<T>(const Var<T>&, const Var<T>&, const std::array<int64_t, 3>&, \
                                   const Shape&);                                             \
  template Var<T> ConvWeightGrad<T>(const Var<T>&, const Var<T>&, const std::array<int64_t, 3>&, \
                                    const Shape&);                                            \
  template Var<T> ReflectPad<T>(const Var<T>&, const std::array<int64_t, 3>&);                \
  template Var<T> UpsampleSpatial<T>(const Var<T>&, int64_t, int64_t);                        \
  template Var<T> BatchNorm3d<T>(const Var<T>&, const Var<T>&, const Var<T>&, T, BatchNormMode, \
                                 RunningStats<T>*);                                           \
  template Var<T> Activate<T>(const Var<T>&, const Activation&);                              \
  template Var<T> MeanSquaredError<T>(const Var<T>&, const Var<T>&);

VIDTEX_INSTANTIATE_NN(float)
VIDTEX_INSTANTIATE_NN(double)

#undef VIDTEX_INSTANTIATE_NN

}  // namespace vidtex::ad
