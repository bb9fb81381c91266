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

#include "vidtex/serialize.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "vidtex/error.h"

namespace vidtex {

namespace fs = std::filesystem;

namespace {

std::string_view Trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string BlobName(size_t scale) { return fmt::format("scale_{:02d}.bin", scale); }

std::string LayerShapes(const ConvStack<float>& stack) {
  std::string s;
  for (const auto& layer : stack.layers()) {
    if (!s.empty()) s += ";";
    s += layer.weight.shape().ToString();
  }
  return s;
}

// Visits every serialized float range of a scale in blob order.
template <typename F>
void ForEachBlock(ScaleModel& model, F f) {
  for (ConvStack<float>* stack : {&model.generator, &model.discriminator}) {
    for (auto& layer : stack->layers()) {
      f(layer.weight.mutable_value().data(), layer.weight.value().numel());
      f(layer.bias.mutable_value().data(), layer.bias.value().numel());
      if (layer.normalized) {
        f(layer.gamma.mutable_value().data(), layer.gamma.value().numel());
        f(layer.beta.mutable_value().data(), layer.beta.value().numel());
        f(layer.stats.mean.data(), static_cast<int64_t>(layer.stats.mean.size()));
        f(layer.stats.var.data(), static_cast<int64_t>(layer.stats.var.size()));
      }
    }
  }
  if (!model.rec_noise.empty()) f(model.rec_noise.data(), model.rec_noise.numel());
}

void EncodeLe(const float* src, int64_t n, std::string& out) {
  for (int64_t i = 0; i < n; ++i) {
    uint32_t bits;
    std::memcpy(&bits, &src[i], sizeof(bits));
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
}

void DecodeLe(const char* src, int64_t n, float* dst) {
  for (int64_t i = 0; i < n; ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<uint32_t>(static_cast<unsigned char>(src[4 * i + b])) << (8 * b);
    std::memcpy(&dst[i], &bits, sizeof(bits));
  }
}

const std::string& Require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw DataError(fmt::format("model manifest: missing key '{}'", key));
  return it->second;
}

template <typename T>
T ParseValue(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw DataError(fmt::format("model manifest: key '{}' has bad value '{}'", key, v));
  }
  return out;
}

std::vector<SpatialDims> ParseSchedule(const std::string& v) {
  std::vector<SpatialDims> dims;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t x = item.find('x');
    if (x == std::string::npos) throw DataError(fmt::format("model manifest: bad schedule entry '{}'", item));
    dims.push_back({ParseValue<int64_t>("schedule", item.substr(0, x)),
                    ParseValue<int64_t>("schedule", item.substr(x + 1))});
  }
  if (dims.empty()) throw DataError("model manifest: empty schedule");
  return dims;
}

}  // namespace

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> kv;
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
    }
    std::string key(Trim(line.substr(0, eq)));
    if (!kv.emplace(key, std::string(Trim(line.substr(eq + 1)))).second) {
      throw DataError(fmt::format("line {}: repeated key '{}'", line_no, key));
    }
  }
  return kv;
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError(fmt::format("short write to {}", path.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError(fmt::format("cannot write {}: {}", path.string(), ec.message()));
}

void SaveModel(const PyramidModel& model, const fs::path& dir) {
  if (model.scales.size() != model.schedule.dims.size()) {
    throw std::logic_error("save_model: scale count does not match the schedule");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  std::string manifest = fmt::format("format = {}\nframes = {}\nnum_scales = {}\nschedule = {}\n", kModelFormat,
                                     model.frames, model.scales.size(), model.schedule.ToString());
  for (size_t n = 0; n < model.scales.size(); ++n) {
    ScaleModel scale = model.scales[n];  // shares storage; only read below
    std::string blob;
    int64_t count = 0;
    ForEachBlock(scale, [&](const float* p, int64_t len) {
      EncodeLe(p, len, blob);
      count += len;
    });
    WriteTextFile(dir / BlobName(n), blob);
    manifest += fmt::format("scale.{}.noise_amp = {:.9g}\n", n, scale.noise_amp);
    manifest += fmt::format("scale.{}.final_rec_loss = {:.9g}\n", n, scale.final_rec_loss);
    manifest += fmt::format("scale.{}.generator = {}\n", n, LayerShapes(scale.generator));
    manifest += fmt::format("scale.{}.discriminator = {}\n", n, LayerShapes(scale.discriminator));
    manifest += fmt::format("scale.{}.rec_noise = {}\n", n,
                            scale.rec_noise.empty() ? std::string("none") : scale.rec_noise.shape().ToString());
    manifest += fmt::format("scale.{}.floats = {}\n", n, count);
  }
  std::string config = model.config.ToText();
  std::istringstream lines(config);
  for (std::string line; std::getline(lines, line);) manifest += "config." + line + "\n";
  WriteTextFile(dir / "manifest.txt", manifest);
}

PyramidModel LoadModel(const fs::path& dir) {
  const auto kv = ParseKeyValues(ReadTextFile(dir / "manifest.txt"));
  if (Require(kv, "format") != kModelFormat) {
    throw DataError(fmt::format("{}: unsupported model format '{}'", dir.string(), Require(kv, "format")));
  }
  PyramidModel model;
  std::string config_text;
  for (const auto& [key, value] : kv) {
    if (key.rfind("config.", 0) == 0) config_text += key.substr(7) + " = " + value + "\n";
  }
  model.config.ApplyText(config_text);
  model.frames = ParseValue<int64_t>("frames", Require(kv, "frames"));
  model.schedule.dims = ParseSchedule(Require(kv, "schedule"));
  const auto n_scales = ParseValue<size_t>("num_scales", Require(kv, "num_scales"));
  if (n_scales != model.schedule.dims.size()) {
    throw DataError(fmt::format("model manifest: num_scales {} but {} schedule entries", n_scales,
                                model.schedule.dims.size()));
  }
  if (n_scales > 1) {
    const auto& d = model.schedule.dims;
    model.schedule.r_height = std::pow(static_cast<double>(d.back().height) / static_cast<double>(d.front().height),
                                       1.0 / static_cast<double>(n_scales - 1));
    model.schedule.r_width = std::pow(static_cast<double>(d.back().width) / static_cast<double>(d.front().width),
                                      1.0 / static_cast<double>(n_scales - 1));
  }

  for (size_t n = 0; n < n_scales; ++n) {
    const std::string p = fmt::format("scale.{}.", n);
    ScaleModel scale = InitScaleModel(static_cast<int>(n), model.config, 0);
    scale.dims = model.schedule.dims[n];
    scale.noise_amp = ParseValue<float>(p + "noise_amp", Require(kv, p + "noise_amp"));
    scale.final_rec_loss = ParseValue<float>(p + "final_rec_loss", Require(kv, p + "final_rec_loss"));
    if (LayerShapes(scale.generator) != Require(kv, p + "generator") ||
        LayerShapes(scale.discriminator) != Require(kv, p + "discriminator")) {
      throw DataError(fmt::format("model manifest: scale {} layer shapes disagree with the stored config", n));
    }
    if (Require(kv, p + "rec_noise") != "none") {
      scale.rec_noise = Tensor<float>(NoiseShape(scale.dims, model.frames));
      if (scale.rec_noise.shape().ToString() != Require(kv, p + "rec_noise")) {
        throw DataError(fmt::format("model manifest: scale {} noise shape disagrees with the schedule", n));
      }
    }
    const std::string blob = ReadTextFile(dir / BlobName(n));
    const auto expected = ParseValue<int64_t>(p + "floats", Require(kv, p + "floats"));
    if (static_cast<int64_t>(blob.size()) != 4 * expected) {
      throw DataError(fmt::format("{}: {} bytes, expected {}", BlobName(n), blob.size(), 4 * expected));
    }
    int64_t offset = 0;
    ForEachBlock(scale, [&](float* dst, int64_t len) {
      if (offset + len > expected) throw DataError(fmt::format("{}: too short for the layer shapes", BlobName(n)));
      DecodeLe(blob.data() + 4 * offset, len, dst);
      offset += len;
    });
    if (offset != expected) throw DataError(fmt::format("{}: {} floats unread", BlobName(n), expected - offset));
    model.scales.push_back(std::move(scale));
  }
  return model;
}

}  // namespace vidtex
