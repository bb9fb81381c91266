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

#include "vidtex/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "vidtex/error.h"
#include "vidtex/rng.h"
#include "vidtex/serialize.h"

namespace vidtex {

namespace {

// ---- MS-SSIM helpers --------------------------------------------------------

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kDataRange = 2.0;
constexpr double kC1 = (0.01 * kDataRange) * (0.01 * kDataRange);
constexpr double kC2 = (0.03 * kDataRange) * (0.03 * kDataRange);
constexpr std::array<double, 5> kScaleWeights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

struct Plane {
  int64_t h = 0, w = 0;
  std::vector<double> v;
  double& at(int64_t y, int64_t x) { return v[static_cast<size_t>(y * w + x)]; }
  double at(int64_t y, int64_t x) const { return v[static_cast<size_t>(y * w + x)]; }
};

Plane MakePlane(int64_t h, int64_t w) { return Plane{h, w, std::vector<double>(static_cast<size_t>(h * w))}; }

const std::array<double, kWindow>& GaussianWindow() {
  static const std::array<double, kWindow> window = [] {
    std::array<double, kWindow> g{};
    double sum = 0;
    for (int i = 0; i < kWindow; ++i) {
      const double d = i - kWindow / 2;
      g[i] = std::exp(-d * d / (2 * kSigma * kSigma));
      sum += g[i];
    }
    for (auto& x : g) x /= sum;
    return g;
  }();
  return window;
}

// Separable Gaussian filter, valid region only.
Plane Filter(const Plane& p) {
  const auto& g = GaussianWindow();
  Plane rows = MakePlane(p.h, p.w - kWindow + 1);
  for (int64_t y = 0; y < rows.h; ++y) {
    for (int64_t x = 0; x < rows.w; ++x) {
      double acc = 0;
      for (int k = 0; k < kWindow; ++k) acc += g[k] * p.at(y, x + k);
      rows.at(y, x) = acc;
    }
  }
  Plane out = MakePlane(p.h - kWindow + 1, rows.w);
  for (int64_t y = 0; y < out.h; ++y) {
    for (int64_t x = 0; x < out.w; ++x) {
      double acc = 0;
      for (int k = 0; k < kWindow; ++k) acc += g[k] * rows.at(y + k, x);
      out.at(y, x) = acc;
    }
  }
  return out;
}

template <typename F>
Plane Combine(const Plane& a, const Plane& b, F f) {
  Plane out = MakePlane(a.h, a.w);
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = f(a.v[i], b.v[i]);
  return out;
}

// Mean SSIM and mean contrast-structure term at one scale.
std::pair<double, double> SsimAndCs(const Plane& x, const Plane& y) {
  const Plane mx = Filter(x), my = Filter(y);
  const Plane exx = Filter(Combine(x, x, std::multiplies<>()));
  const Plane eyy = Filter(Combine(y, y, std::multiplies<>()));
  const Plane exy = Filter(Combine(x, y, std::multiplies<>()));
  double ssim = 0, cs = 0;
  for (size_t i = 0; i < mx.v.size(); ++i) {
    const double sxx = exx.v[i] - mx.v[i] * mx.v[i];
    const double syy = eyy.v[i] - my.v[i] * my.v[i];
    const double sxy = exy.v[i] - mx.v[i] * my.v[i];
    const double c = (2 * sxy + kC2) / (sxx + syy + kC2);
    const double l = (2 * mx.v[i] * my.v[i] + kC1) / (mx.v[i] * mx.v[i] + my.v[i] * my.v[i] + kC1);
    ssim += l * c;
    cs += c;
  }
  const auto n = static_cast<double>(mx.v.size());
  return {ssim / n, cs / n};
}

Plane Halve(const Plane& p) {
  Plane out = MakePlane(p.h / 2, p.w / 2);
  for (int64_t y = 0; y < out.h; ++y) {
    for (int64_t x = 0; x < out.w; ++x) {
      out.at(y, x) = 0.25 * (p.at(2 * y, 2 * x) + p.at(2 * y, 2 * x + 1) + p.at(2 * y + 1, 2 * x) +
                             p.at(2 * y + 1, 2 * x + 1));
    }
  }
  return out;
}

Plane ChannelPlane(const Image& img, int64_t c) {
  Plane p = MakePlane(img.height, img.width);
  std::copy_n(img.data.begin() + c * img.height * img.width, img.height * img.width, p.v.begin());
  return p;
}

void RequireSameImageShape(std::string_view op, const Image& a, const Image& b) {
  if (a.channels != b.channels || a.height != b.height || a.width != b.width) {
    throw DimensionError(fmt::format("{}: image {}x{}x{} vs {}x{}x{}", op, a.channels, a.height, a.width,
                                     b.channels, b.height, b.width));
  }
}

// ---- Feature net helpers ------------------------------------------------------

constexpr double kLeakySlope = 0.2;
constexpr std::array<int64_t, 3> kStageWidths = {16, 32, 64};
constexpr int64_t kCalibrationFrames = 4;
constexpr int64_t kCalibrationSize = 48;
constexpr std::string_view kFeatureFormat = "vidtex-features-1";

Image ConvStride2(const FeatureStage& s, const Image& in) {
  const int64_t ho = (in.height - 1) / 2 + 1;
  const int64_t wo = (in.width - 1) / 2 + 1;
  Image out(s.out_channels, ho, wo);
  for (int64_t co = 0; co < s.out_channels; ++co) {
    for (int64_t y = 0; y < ho; ++y) {
      for (int64_t x = 0; x < wo; ++x) {
        double acc = s.bias[static_cast<size_t>(co)];
        for (int64_t ci = 0; ci < s.in_channels; ++ci) {
          const float* w = &s.weight[static_cast<size_t>((co * s.in_channels + ci) * 9)];
          for (int64_t ky = 0; ky < 3; ++ky) {
            const int64_t sy = 2 * y + ky - 1;
            if (sy < 0 || sy >= in.height) continue;
            for (int64_t kx = 0; kx < 3; ++kx) {
              const int64_t sx = 2 * x + kx - 1;
              if (sx < 0 || sx >= in.width) continue;
              acc += static_cast<double>(w[ky * 3 + kx]) * in.at(ci, sy, sx);
            }
          }
        }
        out.at(co, y, x) = acc > 0 ? acc : kLeakySlope * acc;
      }
    }
  }
  return out;
}

void Standardize(const FeatureStage& s, Image& f) {
  const int64_t plane = f.height * f.width;
  for (int64_t c = 0; c < f.channels; ++c) {
    const double m = s.norm_mean[static_cast<size_t>(c)];
    const double inv = 1.0 / s.norm_std[static_cast<size_t>(c)];
    for (int64_t i = 0; i < plane; ++i) {
      double& v = f.data[static_cast<size_t>(c * plane + i)];
      v = (v - m) * inv;
    }
  }
}

void EncodeFloats(const std::vector<float>& v, std::string& out) {
  for (float f : v) {
    uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
}

std::vector<float> DecodeFloats(const std::string& blob, size_t& offset, size_t count) {
  if (offset + 4 * count > blob.size()) throw DataError("feature weights blob is too short");
  std::vector<float> v(count);
  for (size_t i = 0; i < count; ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<uint32_t>(static_cast<unsigned char>(blob[offset + 4 * i + b])) << (8 * b);
    }
    std::memcpy(&v[i], &bits, sizeof(bits));
  }
  offset += 4 * count;
  return v;
}

// ---- Fréchet helpers --------------------------------------------------------

Eigen::MatrixXd ToMatrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw DimensionError("frechet_distance: ragged feature rows");
    for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd SqrtPsd(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

// tr((A B)^(1/2)) as tr((A^(1/2) B A^(1/2))^(1/2)), which is symmetric PSD.
double TraceSqrtProduct(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd ra = SqrtPsd(a);
  Eigen::MatrixXd m = ra * b * ra;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

}  // namespace

Image FrameImage(const VideoClip& clip, int64_t t) {
  if (t < 0 || t >= clip.frames()) throw std::out_of_range(fmt::format("frame {} of {}", t, clip.frames()));
  Image img(VideoClip::kChannels, clip.height(), clip.width());
  for (int64_t c = 0; c < VideoClip::kChannels; ++c) {
    for (int64_t y = 0; y < clip.height(); ++y) {
      for (int64_t x = 0; x < clip.width(); ++x) img.at(c, y, x) = clip.at(c, t, y, x);
    }
  }
  return img;
}

std::vector<Image> VideoFrames(const VideoClip& clip) {
  std::vector<Image> frames;
  for (int64_t t = 0; t < clip.frames(); ++t) frames.push_back(FrameImage(clip, t));
  return frames;
}

int MsSsimScales(int64_t height, int64_t width) {
  const int64_t side = std::min(height, width);
  int k = 0;
  while (k < 5 && (side >> k) >= kWindow) ++k;
  return k;
}

double MsSsimImage(const Image& a, const Image& b) {
  RequireSameImageShape("ms_ssim", a, b);
  const int scales = MsSsimScales(a.height, a.width);
  if (scales == 0) {
    throw DimensionError(fmt::format("ms_ssim: {}x{} frames are smaller than the {}-px window", a.height,
                                     a.width, kWindow));
  }
  double weight_sum = 0;
  for (int j = 0; j < scales; ++j) weight_sum += kScaleWeights[j];

  double total = 0;
  for (int64_t c = 0; c < a.channels; ++c) {
    Plane x = ChannelPlane(a, c), y = ChannelPlane(b, c);
    double score = 1;
    for (int j = 0; j < scales; ++j) {
      const auto [ssim, cs] = SsimAndCs(x, y);
      const double w = kScaleWeights[j] / weight_sum;
      score *= std::pow(std::max(j + 1 == scales ? ssim : cs, 0.0), w);
      if (j + 1 < scales) {
        x = Halve(x);
        y = Halve(y);
      }
    }
    total += score;
  }
  return total / static_cast<double>(a.channels);
}

double MsSsimVideo(const VideoClip& a, const VideoClip& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError(fmt::format("ms_ssim_video: shapes {} and {} differ", a.shape().ToString(),
                                     b.shape().ToString()));
  }
  if (a.frames() == 0) throw DimensionError("ms_ssim_video: empty video");
  double total = 0;
  for (int64_t t = 0; t < a.frames(); ++t) total += MsSsimImage(FrameImage(a, t), FrameImage(b, t));
  return total / static_cast<double>(a.frames());
}

ProxyFeatureNet::ProxyFeatureNet(uint64_t seed) {
  Rng rng(Rng::Derive(seed, 0xfea7u));
  int64_t in = VideoClip::kChannels;
  for (int64_t width : kStageWidths) {
    FeatureStage s;
    s.in_channels = in;
    s.out_channels = width;
    const double std = std::sqrt(2.0 / static_cast<double>(9 * in));
    for (int64_t i = 0; i < width * in * 9; ++i) s.weight.push_back(static_cast<float>(std * rng.Normal()));
    s.bias.assign(static_cast<size_t>(width), 0.0f);
    stages_.push_back(std::move(s));
    in = width;
  }
  Calibrate(seed);
  description_ = fmt::format(
      "proxy random conv features (seed {}; 3 stride-2 3x3 stages, widths 16/32/64); not Inception/VGG, so values "
      "are not comparable to published FID/LPIPS",
      seed);
}

ProxyFeatureNet::ProxyFeatureNet(std::vector<FeatureStage> stages, std::string description)
    : stages_(std::move(stages)), description_(std::move(description)) {
  int64_t in = VideoClip::kChannels;
  for (const auto& s : stages_) {
    const auto out = static_cast<size_t>(s.out_channels);
    if (s.in_channels != in || s.weight.size() != out * static_cast<size_t>(in) * 9 || s.bias.size() != out ||
        s.norm_mean.size() != out || s.norm_std.size() != out) {
      throw DataError("feature net stages do not chain or have wrong sizes");
    }
    for (float sd : s.norm_std) {
      if (!(sd > 0)) throw DataError("feature net normalization std must be positive");
    }
    in = s.out_channels;
  }
  if (stages_.empty()) throw DataError("feature net has no stages");
}

void ProxyFeatureNet::Calibrate(uint64_t seed) {
  Rng rng(Rng::Derive(seed, 0xca1bu));
  std::vector<Image> current;
  for (int64_t i = 0; i < kCalibrationFrames; ++i) {
    Image img(VideoClip::kChannels, kCalibrationSize, kCalibrationSize);
    for (auto& v : img.data) v = rng.Uniform(-1.0, 1.0);
    current.push_back(std::move(img));
  }
  for (auto& stage : stages_) {
    std::vector<Image> next;
    for (const auto& img : current) next.push_back(ConvStride2(stage, img));
    stage.norm_mean.assign(static_cast<size_t>(stage.out_channels), 0.0f);
    stage.norm_std.assign(static_cast<size_t>(stage.out_channels), 1.0f);
    for (int64_t c = 0; c < stage.out_channels; ++c) {
      double sum = 0, sq = 0, n = 0;
      for (const auto& f : next) {
        const int64_t plane = f.height * f.width;
        for (int64_t i = 0; i < plane; ++i) {
          const double v = f.data[static_cast<size_t>(c * plane + i)];
          sum += v;
          sq += v * v;
          n += 1;
        }
      }
      const double mean = sum / n;
      stage.norm_mean[static_cast<size_t>(c)] = static_cast<float>(mean);
      stage.norm_std[static_cast<size_t>(c)] = static_cast<float>(std::max(std::sqrt(std::max(sq / n - mean * mean, 0.0)), 1e-6));
    }
    for (auto& f : next) Standardize(stage, f);
    current = std::move(next);
  }
}

Image ProxyFeatureNet::RunStage(const FeatureStage& stage, const Image& in) const {
  Image out = ConvStride2(stage, in);
  Standardize(stage, out);
  return out;
}

std::vector<Image> ProxyFeatureNet::Features(const Image& frame) const {
  if (frame.channels != VideoClip::kChannels) {
    throw DimensionError(fmt::format("feature net expects 3 channels, got {}", frame.channels));
  }
  std::vector<Image> out;
  const Image* in = &frame;
  for (const auto& stage : stages_) {
    out.push_back(RunStage(stage, *in));
    in = &out.back();
  }
  return out;
}

std::vector<double> ProxyFeatureNet::Pooled(const Image& frame) const {
  const Image last = Features(frame).back();
  const int64_t plane = last.height * last.width;
  std::vector<double> pooled(static_cast<size_t>(last.channels), 0.0);
  for (int64_t c = 0; c < last.channels; ++c) {
    for (int64_t i = 0; i < plane; ++i) pooled[static_cast<size_t>(c)] += last.data[static_cast<size_t>(c * plane + i)];
    pooled[static_cast<size_t>(c)] /= static_cast<double>(plane);
  }
  return pooled;
}

void SaveFeatureNet(const ProxyFeatureNet& net, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  std::string blob;
  std::string widths = "3";
  for (const auto& s : net.stages()) {
    EncodeFloats(s.weight, blob);
    EncodeFloats(s.bias, blob);
    EncodeFloats(s.norm_mean, blob);
    EncodeFloats(s.norm_std, blob);
    widths += fmt::format(",{}", s.out_channels);
  }
  WriteTextFile(dir / "weights.bin", blob);
  std::string description = net.description();
  std::replace(description.begin(), description.end(), '#', ' ');
  std::replace(description.begin(), description.end(), '\n', ' ');
  WriteTextFile(dir / "features.txt",
                fmt::format("format = {}\nwidths = {}\nblob = weights.bin\ndescription = {}\n", kFeatureFormat,
                            widths, description));
}

ProxyFeatureNet LoadFeatureNet(const std::filesystem::path& dir) {
  const auto kv = ParseKeyValues(ReadTextFile(dir / "features.txt"));
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError(fmt::format("{}: missing key '{}'", (dir / "features.txt").string(), key));
    return it->second;
  };
  if (get("format") != kFeatureFormat) throw DataError(fmt::format("unsupported feature format '{}'", get("format")));
  std::vector<int64_t> widths;
  {
    const std::string& w = get("widths");
    size_t pos = 0;
    while (pos <= w.size()) {
      const size_t comma = std::min(w.find(',', pos), w.size());
      try {
        widths.push_back(std::stoll(w.substr(pos, comma - pos)));
      } catch (const std::exception&) {
        throw DataError(fmt::format("bad feature widths '{}'", w));
      }
      pos = comma + 1;
    }
  }
  if (widths.size() < 2) throw DataError("feature widths need at least one stage");
  const std::string blob = ReadTextFile(dir / get("blob"));
  size_t offset = 0;
  std::vector<FeatureStage> stages;
  for (size_t i = 1; i < widths.size(); ++i) {
    FeatureStage s;
    s.in_channels = widths[i - 1];
    s.out_channels = widths[i];
    const auto out = static_cast<size_t>(s.out_channels);
    s.weight = DecodeFloats(blob, offset, out * static_cast<size_t>(s.in_channels) * 9);
    s.bias = DecodeFloats(blob, offset, out);
    s.norm_mean = DecodeFloats(blob, offset, out);
    s.norm_std = DecodeFloats(blob, offset, out);
    stages.push_back(std::move(s));
  }
  if (offset != blob.size()) throw DataError("feature weights blob has trailing bytes");
  return ProxyFeatureNet(std::move(stages), get("description"));
}

double FrechetDistance(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DimensionError(fmt::format("frechet_distance needs >= 2 samples per set, got {} and {}", a.size(), b.size()));
  }
  if (a.front().size() != b.front().size()) {
    throw DimensionError(fmt::format("frechet_distance: feature sizes {} and {} differ", a.front().size(),
                                     b.front().size()));
  }
  const Eigen::MatrixXd xa = ToMatrix(a), xb = ToMatrix(b);
  const Eigen::RowVectorXd ma = xa.colwise().mean(), mb = xb.colwise().mean();
  const Eigen::MatrixXd ca = xa.rowwise() - ma, cb = xb.rowwise() - mb;
  const Eigen::MatrixXd sa = ca.transpose() * ca / static_cast<double>(xa.rows() - 1);
  const Eigen::MatrixXd sb = cb.transpose() * cb / static_cast<double>(xb.rows() - 1);
  // Averaging both orders makes the result exactly symmetric in (a, b).
  const double cross = TraceSqrtProduct(sa, sb) + TraceSqrtProduct(sb, sa);
  const double d = (ma - mb).squaredNorm() + sa.trace() + sb.trace() - cross;
  return std::max(d, 0.0);
}

double Fid(const std::vector<Image>& frames_a, const std::vector<Image>& frames_b, const ProxyFeatureNet& net) {
  if (frames_a.size() < 2 || frames_b.size() < 2) {
    throw DimensionError(fmt::format("fid needs >= 2 frames per set, got {} and {}", frames_a.size(), frames_b.size()));
  }
  std::vector<std::vector<double>> fa, fb;
  for (const auto& f : frames_a) fa.push_back(net.Pooled(f));
  for (const auto& f : frames_b) fb.push_back(net.Pooled(f));
  return FrechetDistance(fa, fb);
}

double LpipsProxy(const Image& a, const Image& b, const ProxyFeatureNet& net) {
  RequireSameImageShape("lpips_proxy", a, b);
  const auto fa = net.Features(a), fb = net.Features(b);
  double total = 0;
  for (size_t s = 0; s < fa.size(); ++s) {
    const Image& x = fa[s];
    const Image& y = fb[s];
    const int64_t plane = x.height * x.width;
    double stage = 0;
    for (int64_t i = 0; i < plane; ++i) {
      double nx = 0, ny = 0;
      for (int64_t c = 0; c < x.channels; ++c) {
        nx += x.data[static_cast<size_t>(c * plane + i)] * x.data[static_cast<size_t>(c * plane + i)];
        ny += y.data[static_cast<size_t>(c * plane + i)] * y.data[static_cast<size_t>(c * plane + i)];
      }
      nx = std::sqrt(nx) + 1e-10;
      ny = std::sqrt(ny) + 1e-10;
      for (int64_t c = 0; c < x.channels; ++c) {
        const double d = x.data[static_cast<size_t>(c * plane + i)] / nx - y.data[static_cast<size_t>(c * plane + i)] / ny;
        stage += d * d;
      }
    }
    total += stage / static_cast<double>(plane);
  }
  return total;
}

FrameDistance LpipsDistance(const ProxyFeatureNet& net) {
  return [&net](const Image& a, const Image& b) { return LpipsProxy(a, b, net); };
}

double DeltaNLpips(const VideoClip& video, const FrameDistance& distance) {
  const int64_t t = video.frames();
  if (t < 3) throw DimensionError(fmt::format("delta_n_lpips needs >= 3 frames, got {}", t));
  const auto frames = VideoFrames(video);
  const double denom = distance(frames.front(), frames.back());
  if (!(denom > 1e-8)) {
    throw DegenerateInputError(fmt::format(
        "delta_n_lpips: first and last frames are indistinguishable (distance {:.3g} <= 1e-8)", denom));
  }
  std::vector<double> ratios;
  for (int64_t i = 0; i + 1 < t; ++i) ratios.push_back(distance(frames[i], frames[i + 1]) / denom);
  double mean = 0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  return std::sqrt(var / static_cast<double>(ratios.size()));
}

double DeltaNLpips(const VideoClip& video, const ProxyFeatureNet& net) { return DeltaNLpips(video, LpipsDistance(net)); }

double DiversityLpips(const std::vector<VideoClip>& videos, const FrameDistance& distance) {
  if (videos.size() < 2) throw std::invalid_argument(fmt::format("diversity needs >= 2 videos, got {}", videos.size()));
  for (const auto& v : videos) {
    if (v.shape() != videos.front().shape()) {
      throw DimensionError(fmt::format("diversity: video shapes {} and {} differ", v.shape().ToString(),
                                       videos.front().shape().ToString()));
    }
  }
  if (videos.front().frames() == 0) throw DimensionError("diversity: empty videos");
  std::vector<std::vector<Image>> frames;
  for (const auto& v : videos) frames.push_back(VideoFrames(v));
  double total = 0;
  int64_t pairs = 0;
  for (size_t i = 0; i < videos.size(); ++i) {
    for (size_t j = i + 1; j < videos.size(); ++j) {
      double pair = 0;
      for (size_t t = 0; t < frames[i].size(); ++t) pair += distance(frames[i][t], frames[j][t]);
      total += pair / static_cast<double>(frames[i].size());
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

double DiversityLpips(const std::vector<VideoClip>& videos, const ProxyFeatureNet& net) {
  return DiversityLpips(videos, LpipsDistance(net));
}

std::string MetricReport::ToTsv() const {
  auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{:.9g}", *v) : std::string("-"); };
  return fmt::format("ms_ssim\tms_ssim_reconstruction\tfid\tdelta_n_lpips\tdiversity\tbackbone\n{}\t{}\t{}\t{}\t{}\t{}\n",
                     cell(ms_ssim), cell(ms_ssim_reconstruction), cell(fid), cell(delta_n_lpips), cell(diversity),
                     backbone);
}

std::string MetricReport::ToKeyValue() const {
  std::string out;
  auto line = [&out](std::string_view key, const std::optional<double>& v) {
    if (v) out += fmt::format("{} = {:.9g}\n", key, *v);
  };
  line("ms_ssim", ms_ssim);
  line("ms_ssim_reconstruction", ms_ssim_reconstruction);
  line("fid", fid);
  line("delta_n_lpips", delta_n_lpips);
  line("diversity", diversity);
  out += fmt::format("backbone = {}\n", backbone);
  return out;
}

}  // namespace vidtex
