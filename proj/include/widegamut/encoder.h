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

// Pixel descriptor normalization and sinusoidal feature lifting.
//
// Layout of an encoded vector: scalars in the fixed order x, y, R', G', B'
// (restricted by the input mode); each scalar m expands to the interleaved
// pairs sin(2^0 pi m), cos(2^0 pi m), ..., sin(2^(K-1) pi m), cos(2^(K-1) pi m).

#ifndef WIDEGAMUT_ENCODER_H_
#define WIDEGAMUT_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "widegamut/image.h"

namespace widegamut {

enum class InputMode : uint8_t {
  kXY = 0,
  kRGB = 1,
  kXYRGB = 2,
};

std::string_view InputModeName(InputMode mode);
std::optional<InputMode> ParseInputMode(std::string_view name);

struct EncoderConfig {
  // Frequencies per scalar. 0 disables the sinusoidal lift: the normalized
  // scalars are passed through unchanged.
  int k = 12;
  InputMode mode = InputMode::kXYRGB;

  bool encoding_enabled() const { return k > 0; }
  size_t scalar_count() const;
  size_t feature_dim() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// Maps a pixel index on an axis of `extent` samples to [-1,1]. A single
// sample axis maps to 0.
float NormalizeCoord(size_t index, size_t extent);
// Maps a unit-range channel value to [-1,1]; inputs are clamped to [0,1].
float NormalizeChannel(float v);

// Writes feature_dim() values for one already-normalized descriptor.
// `normalized` holds x, y, R', G', B' (all five, even when the mode uses
// fewer).
void EncodeDescriptor(const EncoderConfig& config,
                      std::span<const float, 5> normalized,
                      std::span<float> out);

// Encodes pixel `index` of `clipped` into `out`.
void EncodePixel(const EncoderConfig& config, const LinearRgbImage& clipped,
                 size_t index, std::span<float> out);

// Row-major features for the listed pixels: indices.size() x feature_dim().
std::vector<float> EncodePixels(const EncoderConfig& config,
                                const LinearRgbImage& clipped,
                                std::span<const size_t> indices);

}  // namespace widegamut

#endif  // WIDEGAMUT_ENCODER_H_
