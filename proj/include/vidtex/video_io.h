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

// Videos on disk are directories of binary PPM (P6, 8-bit RGB) frames named
// frame_00000.ppm, frame_00001.ppm, ... with contiguous indices from 0.
// Pixel p maps to p / 127.5 - 1; writing uses floor((v + 1) * 127.5 + 0.5)
// after clamping v to [-1, 1].

#ifndef VIDTEX_VIDEO_IO_H_
#define VIDTEX_VIDEO_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "vidtex/video.h"

namespace vidtex {

std::string FrameFileName(int64_t index);

uint8_t QuantizePixel(float v);
float DequantizePixel(uint8_t p);

/// Throws DataError naming the frame on a missing index, unreadable or
/// malformed file, or size mismatch; DataError too if no frames exist.
VideoClip LoadVideo(const std::filesystem::path& dir);

/// Creates `dir`, removes stale frame files and writes every frame through a
/// temporary file. Throws DataError when the directory is not writable.
void SaveVideo(const VideoClip& clip, const std::filesystem::path& dir);

}  // namespace vidtex

#endif  // VIDTEX_VIDEO_IO_H_
