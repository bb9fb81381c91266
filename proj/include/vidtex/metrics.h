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

// Video quality and diversity metrics.
//
// FID and the LPIPS-style distance run on ProxyFeatureNet, a fixed-seed
// random conv extractor standing in for pretrained Inception/VGG weights.
// Values are only comparable with each other (orderings, ablations), never
// with numbers computed on pretrained backbones.

#ifndef VIDTEX_METRICS_H_
#define VIDTEX_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vidtex/video.h"

namespace vidtex {

/// Channel-major (C, H, W) double image.
struct Image {
  int64_t channels = 0, height = 0, width = 0;
  std::vector<double> data;

  Image() = default;
  Image(int64_t c, int64_t h, int64_t w) : channels(c), height(h), width(w), data(static_cast<size_t>(c * h * w)) {}
  double& at(int64_t c, int64_t y, int64_t x) { return data[static_cast<size_t>((c * height + y) * width + x)]; }
  double at(int64_t c, int64_t y, int64_t x) const {
    return data[static_cast<size_t>((c * height + y) * width + x)];
  }
  bool operator==(const Image&) const = default;
};

Image FrameImage(const VideoClip& clip, int64_t t);

// ---- MS-SSIM ---------------------------------------------------------------

/// Largest scale count k <= 5 with min(h, w) / 2^(k-1) >= 11.
int MsSsimScales(int64_t height, int64_t width);

/// MS-SSIM of two images with values in [-1, 1] (data range 2), averaged over
/// channels. 11-tap Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, the
/// five standard scale weights renormalized to the scales used, contrast
/// terms clamped at 0. Throws DimensionError on a shape mismatch or a side
/// shorter than 11 px.
double MsSsimImage(const Image& a, const Image& b);

/// Mean of per-frame MS-SSIM.
double MsSsimVideo(const VideoClip& a, const VideoClip& b);

// ---- Proxy feature network ---------------------------------------------------

struct FeatureStage {
  int64_t in_channels = 0, out_channels = 0;
  std::vector<float> weight;  // (out, in, 3, 3)
  std::vector<float> bias;    // (out)
  std::vector<float> norm_mean, norm_std;  // per output channel
};

/// Three stride-2 3x3 conv stages (widths 16/32/64) with leaky ReLU 0.2.
/// Each stage's output is standardized per channel with constants measured
/// once on seeded calibration noise.
class ProxyFeatureNet {
 public:
  explicit ProxyFeatureNet(uint64_t seed = 0);
  /// Externally supplied weights; stage widths must chain from 3 channels.
  explicit ProxyFeatureNet(std::vector<FeatureStage> stages, std::string description);

  /// Standardized output of every stage.
  std::vector<Image> Features(const Image& frame) const;
  /// Spatial mean of the last stage.
  std::vector<double> Pooled(const Image& frame) const;

  const std::vector<FeatureStage>& stages() const { return stages_; }
  /// Names the backbone for metric reports.
  const std::string& description() const { return description_; }

 private:
  void Calibrate(uint64_t seed);
  Image RunStage(const FeatureStage& stage, const Image& in) const;

  std::vector<FeatureStage> stages_;
  std::string description_;
};

/// features.txt manifest plus a little-endian float32 blob holding, per stage,
/// weight, bias, norm_mean, norm_std. Throws DataError on bad files.
void SaveFeatureNet(const ProxyFeatureNet& net, const std::filesystem::path& dir);
ProxyFeatureNet LoadFeatureNet(const std::filesystem::path& dir);

// ---- FID ---------------------------------------------------------------------

/// |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a S_b)^(1/2)) between the Gaussian
/// fits (unbiased covariance) of two sets of feature rows. Negative
/// eigenvalues from round-off are clipped to 0. Throws DimensionError with
/// fewer than 2 rows per set or unequal dimensions.
double FrechetDistance(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

/// FID over pooled proxy features of every frame.
double Fid(const std::vector<Image>& frames_a, const std::vector<Image>& frames_b, const ProxyFeatureNet& net);
std::vector<Image> VideoFrames(const VideoClip& clip);

// ---- LPIPS-style distances --------------------------------------------------

using FrameDistance = std::function<double(const Image&, const Image&)>;

/// Per stage: unit-normalize each pixel's channel vector, square the
/// differences, sum over channels and average over pixels; summed over stages.
double LpipsProxy(const Image& a, const Image& b, const ProxyFeatureNet& net);
FrameDistance LpipsDistance(const ProxyFeatureNet& net);

/// Population standard deviation of d(f_i, f_{i+1}) / d(f_0, f_{T-1}) over
/// consecutive frame pairs. Throws DimensionError for T < 3 and
/// DegenerateInputError when the denominator is <= 1e-8.
double DeltaNLpips(const VideoClip& video, const FrameDistance& distance);
double DeltaNLpips(const VideoClip& video, const ProxyFeatureNet& net);

/// Mean over unordered pairs of the mean frame-wise distance. Throws
/// std::invalid_argument with fewer than 2 videos, DimensionError on mixed
/// shapes.
double DiversityLpips(const std::vector<VideoClip>& videos, const FrameDistance& distance);
double DiversityLpips(const std::vector<VideoClip>& videos, const ProxyFeatureNet& net);

// ---- Reports -------------------------------------------------------------------

struct MetricReport {
  /// ms_ssim compares two given videos; ms_ssim_reconstruction compares a
  /// model's reconstruction with its training target.
  std::optional<double> ms_ssim, ms_ssim_reconstruction, fid, delta_n_lpips, diversity;
  std::string backbone;

  /// Header line and value line; absent metrics print as "-".
  std::string ToTsv() const;
  std::string ToKeyValue() const;
};

}  // namespace vidtex

#endif  // VIDTEX_METRICS_H_
