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

#include "vidtex/video_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "vidtex/error.h"

namespace vidtex {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPrefix = "frame_";
constexpr std::string_view kSuffix = ".ppm";

// Index encoded in a frame file name, or -1 when the name is not a frame.
int64_t FrameIndex(const std::string& name) {
  if (name.size() <= kPrefix.size() + kSuffix.size()) return -1;
  if (name.compare(0, kPrefix.size(), kPrefix) != 0) return -1;
  if (name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) return -1;
  const std::string digits = name.substr(kPrefix.size(), name.size() - kPrefix.size() - kSuffix.size());
  if (digits.size() < 5 || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return -1;
  }
  return std::stoll(digits);
}

class PpmReader {
 public:
  PpmReader(std::string bytes, std::string name) : bytes_(std::move(bytes)), name_(std::move(name)) {}

  std::string Token() {
    SkipSpaceAndComments();
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) tok += bytes_[pos_++];
    if (tok.empty()) Fail("truncated header");
    return tok;
  }

  int64_t Number() {
    const std::string tok = Token();
    if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
      Fail(fmt::format("bad header field '{}'", tok));
    }
    return std::stoll(tok);
  }

  const unsigned char* Pixels(int64_t count) {
    ++pos_;  // the single whitespace byte after maxval
    if (pos_ + static_cast<size_t>(count) > bytes_.size()) Fail("truncated pixel data");
    return reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
  }

  [[noreturn]] void Fail(const std::string& why) const { throw DataError(fmt::format("{}: {}", name_, why)); }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string bytes_;
  std::string name_;
  size_t pos_ = 0;
};

}  // namespace

std::string FrameFileName(int64_t index) { return fmt::format("frame_{:05d}.ppm", index); }

uint8_t QuantizePixel(float v) {
  const double x = std::clamp(static_cast<double>(v), -1.0, 1.0);
  return static_cast<uint8_t>(std::min(255.0, std::floor((x + 1.0) * 127.5 + 0.5)));
}

float DequantizePixel(uint8_t p) { return static_cast<float>(static_cast<double>(p) / 127.5 - 1.0); }

VideoClip LoadVideo(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataError(fmt::format("{} is not a directory", dir.string()));
  std::map<int64_t, fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const int64_t index = FrameIndex(entry.path().filename().string());
    if (index >= 0) frames[index] = entry.path();
  }
  if (frames.empty()) throw DataError(fmt::format("{} contains no frame_NNNNN.ppm files", dir.string()));
  int64_t expect = 0;
  for (const auto& [index, path] : frames) {
    if (index != expect) throw DataError(fmt::format("{}: missing frame {}", dir.string(), FrameFileName(expect)));
    ++expect;
  }

  VideoClip clip;
  int64_t height = 0, width = 0;
  for (const auto& [index, path] : frames) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot read frame {}", path.string()));
    PpmReader reader(std::string(std::istreambuf_iterator<char>(in), {}), path.string());
    if (reader.Token() != "P6") reader.Fail("not a binary PPM (P6) file");
    const int64_t w = reader.Number();
    const int64_t h = reader.Number();
    if (reader.Number() != 255) reader.Fail("only 8-bit PPM (maxval 255) is supported");
    if (w < 1 || h < 1) reader.Fail("empty image");
    if (index == 0) {
      height = h;
      width = w;
      clip = VideoClip(static_cast<int64_t>(frames.size()), h, w);
    } else if (h != height || w != width) {
      reader.Fail(fmt::format("size {}x{} differs from frame 0 ({}x{})", w, h, width, height));
    }
    const unsigned char* px = reader.Pixels(3 * h * w);
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        for (int64_t c = 0; c < 3; ++c) clip.at(c, index, y, x) = DequantizePixel(px[(y * w + x) * 3 + c]);
      }
    }
  }
  return clip;
}

void SaveVideo(const VideoClip& clip, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (FrameIndex(entry.path().filename().string()) >= 0) fs::remove(entry.path(), ec);
  }
  const int64_t h = clip.height(), w = clip.width();
  std::string buf;
  for (int64_t t = 0; t < clip.frames(); ++t) {
    buf = fmt::format("P6\n{} {}\n255\n", w, h);
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        for (int64_t c = 0; c < 3; ++c) buf.push_back(static_cast<char>(QuantizePixel(clip.at(c, t, y, x))));
      }
    }
    const fs::path path = dir / FrameFileName(t);
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError(fmt::format("cannot write frame {}", path.string()));
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      if (!out) throw DataError(fmt::format("short write to frame {}", path.string()));
    }
    fs::rename(tmp, path, ec);
    if (ec) throw DataError(fmt::format("cannot write frame {}: {}", path.string(), ec.message()));
  }
}

}  // namespace vidtex
