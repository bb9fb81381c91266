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

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "vidtex/error.h"
#include "vidtex/rng.h"
#include "vidtex/serialize.h"
#include "vidtex/synthetic.h"
#include "vidtex/video_io.h"

namespace vidtex {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("vidtex_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void WritePpm(const fs::path& path, int w, int h, uint8_t value, const std::string& extra_header = "") {
  std::ofstream out(path, std::ios::binary);
  out << "P6\n" << extra_header << w << " " << h << "\n255\n";
  for (int i = 0; i < w * h * 3; ++i) out.put(static_cast<char>(value));
}

std::string Bytes(const fs::path& p) { return ReadTextFile(p); }

TEST(QuantizeTest, Endpoints) {
  EXPECT_EQ(QuantizePixel(-1.0f), 0);
  EXPECT_EQ(QuantizePixel(1.0f), 255);
  EXPECT_EQ(QuantizePixel(0.0f), 128);
  EXPECT_EQ(QuantizePixel(-3.0f), 0);
  EXPECT_EQ(QuantizePixel(7.0f), 255);
  EXPECT_NEAR(DequantizePixel(0), -1.0f, 1e-6);
  EXPECT_NEAR(DequantizePixel(255), 1.0f, 1e-6);
}

TEST(QuantizeTest, RoundHalfUpOracle) {
  for (int p = 0; p < 256; ++p) {
    const float v = DequantizePixel(static_cast<uint8_t>(p));
    EXPECT_NEAR(v, p / 127.5 - 1.0, 1e-6);
    EXPECT_EQ(QuantizePixel(v), p);
  }
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.Uniform(-1.0, 1.0);
    const auto want = static_cast<int>(std::floor((v + 1.0) * 127.5 + 0.5));
    const int got = QuantizePixel(static_cast<float>(v));
    EXPECT_LE(std::abs(got - want), 1);  // float rounding right at a half step
  }
}

TEST(VideoIoTest, RoundTripWithinQuantizationBound) {
  TempDir dir("roundtrip");
  Rng rng(11);
  const VideoClip clip(rng.UniformTensor<float>(Shape(1, 3, 4, 7, 9), -1.0, 1.0));
  SaveVideo(clip, dir.path());
  const VideoClip back = LoadVideo(dir.path());
  ASSERT_EQ(back.shape(), clip.shape());
  for (int64_t i = 0; i < clip.tensor().numel(); ++i) {
    EXPECT_LE(std::abs(back.tensor()[i] - clip.tensor()[i]), 1.0 / 255.0 + 1e-7);
  }
  EXPECT_TRUE(fs::exists(dir.path() / "frame_00003.ppm"));
  EXPECT_EQ(FrameFileName(12), "frame_00012.ppm");
}

TEST(VideoIoTest, ResaveIsBitwiseStable) {
  TempDir a("resave_a"), b("resave_b");
  SyntheticSpec spec;
  spec.frames = 3;
  spec.size = 12;
  SaveVideo(MakeSynthetic(spec), a.path());
  SaveVideo(LoadVideo(a.path()), b.path());
  for (int t = 0; t < 3; ++t) EXPECT_EQ(Bytes(a.path() / FrameFileName(t)), Bytes(b.path() / FrameFileName(t)));
}

TEST(VideoIoTest, SaveRemovesStaleFrames) {
  TempDir dir("stale");
  SaveVideo(VideoClip(5, 4, 4), dir.path());
  SaveVideo(VideoClip(2, 4, 4), dir.path());
  EXPECT_EQ(LoadVideo(dir.path()).frames(), 2);
}

TEST(VideoIoTest, PixelMapping) {
  TempDir dir("mapping");
  WritePpm(dir.path() / "frame_00000.ppm", 2, 2, 0);
  WritePpm(dir.path() / "frame_00001.ppm", 2, 2, 255, "# a comment\n");
  const VideoClip v = LoadVideo(dir.path());
  EXPECT_NEAR(v.at(0, 0, 0, 0), -1.0f, 1e-6);
  EXPECT_NEAR(v.at(2, 1, 1, 1), 1.0f, 1e-6);
}

TEST(VideoIoTest, GapNamesMissingFrame) {
  TempDir dir("gap");
  WritePpm(dir.path() / "frame_00000.ppm", 2, 2, 10);
  WritePpm(dir.path() / "frame_00001.ppm", 2, 2, 10);
  WritePpm(dir.path() / "frame_00003.ppm", 2, 2, 10);
  try {
    LoadVideo(dir.path());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("frame_00002"), std::string::npos) << e.what();
  }
}

TEST(VideoIoTest, MissingFirstFrameIsReported) {
  TempDir dir("nofirst");
  WritePpm(dir.path() / "frame_00001.ppm", 2, 2, 10);
  EXPECT_THROW(LoadVideo(dir.path()), DataError);
}

TEST(VideoIoTest, SizeMismatchNamesFrame) {
  TempDir dir("mismatch");
  WritePpm(dir.path() / "frame_00000.ppm", 2, 2, 10);
  WritePpm(dir.path() / "frame_00001.ppm", 3, 2, 10);
  try {
    LoadVideo(dir.path());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("frame_00001"), std::string::npos) << e.what();
  }
}

TEST(VideoIoTest, MalformedAndEmpty) {
  TempDir dir("malformed");
  EXPECT_THROW(LoadVideo(dir.path()), DataError);
  {
    std::ofstream out(dir.path() / "frame_00000.ppm", std::ios::binary);
    out << "P3\n2 2\n255\n";
  }
  EXPECT_THROW(LoadVideo(dir.path()), DataError);
  {
    std::ofstream out(dir.path() / "frame_00000.ppm", std::ios::binary);
    out << "P6\n2 2\n255\nabc";  // truncated pixel data
  }
  EXPECT_THROW(LoadVideo(dir.path()), DataError);
  EXPECT_THROW(LoadVideo(dir.path() / "absent"), DataError);
}

TEST(SyntheticTest, DeterministicAndSeedSensitive) {
  for (const char* name : {"advected-noise", "translating-grating", "rotating-pattern", "multi-phase"}) {
    SyntheticSpec spec;
    spec.kind = ParseSyntheticKind(name);
    EXPECT_EQ(SyntheticKindName(spec.kind), name);
    spec.seed = 4;
    const VideoClip a = MakeSynthetic(spec);
    EXPECT_EQ(a, MakeSynthetic(spec)) << name;
    spec.seed = 5;
    EXPECT_NE(a, MakeSynthetic(spec)) << name;
  }
  EXPECT_THROW(ParseSyntheticKind("plasma"), DataError);
}

TEST(SyntheticTest, EveryKindMovesAndStaysInRange) {
  for (auto kind : {SyntheticKind::kAdvectedNoise, SyntheticKind::kTranslatingGrating,
                    SyntheticKind::kRotatingPattern, SyntheticKind::kMultiPhase}) {
    SyntheticSpec spec;
    spec.kind = kind;
    spec.frames = 40;
    spec.phase_len = 8;
    const VideoClip v = MakeSynthetic(spec);
    EXPECT_EQ(v.shape(), Shape(1, 3, 40, 32, 32));
    for (int64_t i = 0; i < v.tensor().numel(); ++i) {
      ASSERT_LE(std::abs(v.tensor()[i]), 0.9f + 1e-6f);
    }
    for (int64_t t = 0; t + 1 < v.frames(); ++t) {
      double diff = 0;
      for (int64_t c = 0; c < 3; ++c)
        for (int64_t y = 0; y < v.height(); ++y)
          for (int64_t x = 0; x < v.width(); ++x) diff += std::abs(v.at(c, t + 1, y, x) - v.at(c, t, y, x));
      EXPECT_GT(diff, 0.0) << SyntheticKindName(kind) << " frame " << t;
    }
  }
}

TEST(SyntheticTest, GratingIsExactCyclicShift) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kTranslatingGrating;
  spec.vx = 2;
  spec.vy = 1;
  spec.frames = 6;
  spec.size = 20;
  const VideoClip v = MakeSynthetic(spec);
  const int64_t n = spec.size;
  for (int64_t t = 0; t + 1 < v.frames(); ++t)
    for (int64_t c = 0; c < 3; ++c)
      for (int64_t y = 0; y < n; ++y)
        for (int64_t x = 0; x < n; ++x) {
          ASSERT_EQ(v.at(c, t + 1, y, x), v.at(c, t, (y - 1 + n) % n, (x - 2 + n) % n)) << t << " " << y << " " << x;
        }
}

TEST(SyntheticTest, RejectsBadSpec) {
  SyntheticSpec spec;
  spec.frames = 0;
  EXPECT_THROW(MakeSynthetic(spec), std::invalid_argument);
  spec = SyntheticSpec{};
  spec.size = -3;
  EXPECT_THROW(MakeSynthetic(spec), std::invalid_argument);
}

}  // namespace
}  // namespace vidtex
