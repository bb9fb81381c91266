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

// Model directory layout:
//
//   manifest.txt   key = value text: format, frames, schedule, per-scale
//                  noise amplitude, final reconstruction loss and layer
//                  shapes, then the training config as config.<key> lines.
//   scale_NN.bin   little-endian float32 values of scale NN in this order:
//                  generator layers then critic layers, each as weight,
//                  bias and, for normalized layers, gamma, beta, running
//                  mean, running variance; then z0 (scale 0 only).
//
// Floats in the manifest are printed with 9 significant digits, which
// round-trips exactly.

#ifndef VIDTEX_SERIALIZE_H_
#define VIDTEX_SERIALIZE_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "vidtex/model.h"

namespace vidtex {

inline constexpr std::string_view kModelFormat = "vidtex-model-1";

/// Creates `dir` if needed. Throws DataError when a file cannot be written.
void SaveModel(const PyramidModel& model, const std::filesystem::path& dir);
/// Throws DataError on a missing or inconsistent file.
PyramidModel LoadModel(const std::filesystem::path& dir);

/// `key = value` lines; `#` comments and blank lines are skipped. Throws
/// DataError on a malformed line or a repeated key.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);

std::string ReadTextFile(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace vidtex

#endif  // VIDTEX_SERIALIZE_H_
