// Copyright 2026 The widegamut Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// PNG reading and writing (pixel data through libpng) plus chunk-level
// access for ancillary metadata.
//
// 16-bit PNGs carry ProPhoto values as v = sample / 65535 with no transfer
// curve applied (linear convention). 8-bit PNGs carry gamma-encoded sRGB.

#ifndef WIDEGAMUT_PNG_IO_H_
#define WIDEGAMUT_PNG_IO_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "widegamut/image.h"

namespace widegamut {

using Bytes = std::vector<uint8_t>;

// Decoded samples, RGB interleaved. Gray, palette and alpha inputs are
// expanded/stripped to RGB.
struct PngPixels {
  uint32_t width = 0;
  uint32_t height = 0;
  int bit_depth = 8;  // 8 or 16
  std::vector<uint16_t> samples;

  friend bool operator==(const PngPixels&, const PngPixels&) = default;
};

PngPixels DecodePng(std::span<const uint8_t> png);

struct TextEntry {
  std::string keyword;
  std::string text;
};

// bit_depth 8 or 16; channels 1 (gray) or 3 (RGB). Text entries are written
// as tEXt chunks. Output is deterministic for identical input.
Bytes EncodePng(uint32_t width, uint32_t height, int bit_depth, int channels,
                std::span<const uint16_t> samples,
                std::span<const TextEntry> text = {});

LinearRgbImage ProPhotoFromPng(const PngPixels& px);
SrgbImage SrgbFromPng(const PngPixels& px);

// Values are rounded to the nearest 16-bit code after clamping to [0,1].
Bytes EncodeProPhotoPng(const LinearRgbImage& img);
// Values are rounded to the nearest 8-bit code after clamping to [0,1].
Bytes EncodeSrgbPng(const SrgbImage& img);
// 255 = out of gamut.
Bytes EncodeMaskPng(const GamutMask& mask);
GamutMask MaskFromPng(const PngPixels& px);

// Raw chunk stream access.
struct PngChunk {
  std::array<char, 4> type{};
  Bytes data;

  std::string_view type_name() const { return {type.data(), type.size()}; }
};

// Splits a PNG into chunks, verifying signature, lengths and CRCs.
std::vector<PngChunk> ParseChunks(std::span<const uint8_t> png);
// Signature + chunks with freshly computed CRCs.
Bytes AssembleChunks(std::span<const PngChunk> chunks);

// tEXt entries of a PNG, in file order.
std::vector<TextEntry> ReadTextChunks(std::span<const uint8_t> png);

Bytes ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace widegamut

#endif  // WIDEGAMUT_PNG_IO_H_
