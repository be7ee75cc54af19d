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

#include "widegamut/encoder.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "widegamut/error.h"

namespace widegamut {

std::string_view InputModeName(InputMode mode) {
  switch (mode) {
    case InputMode::kXY:
      return "xy";
    case InputMode::kRGB:
      return "rgb";
    case InputMode::kXYRGB:
      return "xyrgb";
  }
  return "?";
}

std::optional<InputMode> ParseInputMode(std::string_view name) {
  if (name == "xy") return InputMode::kXY;
  if (name == "rgb") return InputMode::kRGB;
  if (name == "xyrgb") return InputMode::kXYRGB;
  return std::nullopt;
}

size_t EncoderConfig::scalar_count() const {
  switch (mode) {
    case InputMode::kXY:
      return 2;
    case InputMode::kRGB:
      return 3;
    case InputMode::kXYRGB:
      return 5;
  }
  return 0;
}

size_t EncoderConfig::feature_dim() const {
  const size_t n = scalar_count();
  return encoding_enabled() ? 2 * static_cast<size_t>(k) * n : n;
}

float NormalizeCoord(size_t index, size_t extent) {
  if (extent <= 1) return 0.0f;
  return static_cast<float>(2.0 * static_cast<double>(index) /
                                static_cast<double>(extent - 1) -
                            1.0);
}

float NormalizeChannel(float v) {
  return 2.0f * std::clamp(v, 0.0f, 1.0f) - 1.0f;
}

void EncodeDescriptor(const EncoderConfig& config,
                      std::span<const float, 5> normalized,
                      std::span<float> out) {
  if (out.size() != config.feature_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "encoder output size mismatch");
  }
  const size_t first = config.mode == InputMode::kRGB ? 2 : 0;
  const size_t last = config.mode == InputMode::kXY ? 2 : 5;
  size_t o = 0;
  for (size_t s = first; s < last; ++s) {
    const double m = normalized[s];
    if (!config.encoding_enabled()) {
      out[o++] = static_cast<float>(m);
      continue;
    }
    double freq = std::numbers::pi;
    for (int f = 0; f < config.k; ++f) {
      // The argument is formed in double; 2^11 pi m in float would lose the
      // low bits that matter for the highest frequencies.
      const double a = freq * m;
      out[o++] = static_cast<float>(std::sin(a));
      out[o++] = static_cast<float>(std::cos(a));
      freq *= 2.0;
    }
  }
}

void EncodePixel(const EncoderConfig& config, const LinearRgbImage& clipped,
                 size_t index, std::span<float> out) {
  const size_t w = clipped.width();
  const Rgb c = clipped.pixel(index);
  const std::array<float, 5> normalized = {
      NormalizeCoord(index % w, w), NormalizeCoord(index / w, clipped.height()),
      NormalizeChannel(c[0]), NormalizeChannel(c[1]), NormalizeChannel(c[2])};
  EncodeDescriptor(config, normalized, out);
}

std::vector<float> EncodePixels(const EncoderConfig& config,
                                const LinearRgbImage& clipped,
                                std::span<const size_t> indices) {
  const size_t dim = config.feature_dim();
  std::vector<float> out(indices.size() * dim);
  for (size_t i = 0; i < indices.size(); ++i) {
    EncodePixel(config, clipped, indices[i],
                std::span<float>(out.data() + i * dim, dim));
  }
  return out;
}

}  // namespace widegamut
