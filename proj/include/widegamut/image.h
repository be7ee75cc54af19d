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

#ifndef WIDEGAMUT_IMAGE_H_
#define WIDEGAMUT_IMAGE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace widegamut {

using Rgb = std::array<float, 3>;

// Interleaved three-channel float raster. The two color roles below share
// this storage but are distinct types so a ProPhoto buffer can never be
// passed where gamma-encoded sRGB is expected.
class RgbRaster {
 public:
  RgbRaster() = default;
  RgbRaster(size_t width, size_t height);

  size_t width() const { return width_; }
  size_t height() const { return height_; }
  size_t pixel_count() const { return width_ * height_; }
  bool empty() const { return pixel_count() == 0; }

  Rgb pixel(size_t index) const {
    const float* p = &values_[3 * index];
    return {p[0], p[1], p[2]};
  }
  void set_pixel(size_t index, const Rgb& rgb) {
    float* p = &values_[3 * index];
    p[0] = rgb[0];
    p[1] = rgb[1];
    p[2] = rgb[2];
  }

  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }

  bool SameShape(const RgbRaster& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const RgbRaster&, const RgbRaster&) = default;

 private:
  size_t width_ = 0;
  size_t height_ = 0;
  std::vector<float> values_;
};

// Linear-light ProPhoto RGB, unit range. Holds the original image, its
// clipped round trip, and the recovered estimate.
class LinearRgbImage : public RgbRaster {
 public:
  using RgbRaster::RgbRaster;
  friend bool operator==(const LinearRgbImage&, const LinearRgbImage&) = default;
};

// Gamma-encoded sRGB in [0,1]. When quantized() every value is k/255.
class SrgbImage : public RgbRaster {
 public:
  using RgbRaster::RgbRaster;
  SrgbImage(size_t width, size_t height, bool quantized)
      : RgbRaster(width, height), quantized_(quantized) {}

  bool quantized() const { return quantized_; }
  void set_quantized(bool q) { quantized_ = q; }

  friend bool operator==(const SrgbImage&, const SrgbImage&) = default;

 private:
  bool quantized_ = false;
};

// true = out of gamut (some linear-sRGB channel fell outside [0,1]).
class GamutMask {
 public:
  GamutMask() = default;
  GamutMask(size_t width, size_t height, bool fill = false)
      : width_(width), height_(height), flags_(width * height, fill ? 1 : 0) {}

  size_t width() const { return width_; }
  size_t height() const { return height_; }
  size_t pixel_count() const { return flags_.size(); }

  bool operator[](size_t index) const { return flags_[index] != 0; }
  void set(size_t index, bool value) { flags_[index] = value ? 1 : 0; }

  size_t CountOutOfGamut() const;
  double OutOfGamutFraction() const;

  friend bool operator==(const GamutMask&, const GamutMask&) = default;

 private:
  size_t width_ = 0;
  size_t height_ = 0;
  std::vector<uint8_t> flags_;
};

}  // namespace widegamut

#endif  // WIDEGAMUT_IMAGE_H_
