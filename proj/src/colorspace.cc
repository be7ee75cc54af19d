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

#include "widegamut/colorspace.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "widegamut/error.h"

namespace widegamut {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kDimensionMismatch:
      return "dimension-mismatch";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kBadMagic:
      return "bad-magic";
    case ErrorCode::kVersionMismatch:
      return "version-mismatch";
    case ErrorCode::kTruncated:
      return "truncated";
    case ErrorCode::kMissingMetadata:
      return "missing-metadata";
    case ErrorCode::kMalformedBase64:
      return "malformed-base64";
    case ErrorCode::kPng:
      return "png";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

RgbRaster::RgbRaster(size_t width, size_t height)
    : width_(width), height_(height), values_(3 * width * height, 0.0f) {}

size_t GamutMask::CountOutOfGamut() const {
  return static_cast<size_t>(std::count(flags_.begin(), flags_.end(), 1));
}

double GamutMask::OutOfGamutFraction() const {
  if (flags_.empty()) return 0.0;
  return static_cast<double>(CountOutOfGamut()) /
         static_cast<double>(flags_.size());
}

namespace {

// ProPhoto -> sRGB with CAT02 (D50 -> D65), as published to four decimals.
constexpr Mat3 kProPhotoToSrgb = {{
    {2.0365, -0.7376, -0.2993},
    {-0.2257, 1.2232, 0.0027},
    {-0.0105, -0.1349, 1.1452},
}};

constexpr double kLinearBreak = 0.0031308;
constexpr double kLinearSlope = 12.92;
// Decoding switches branch at the image of the encode breakpoint so the two
// directions pick the same branch for every value.
constexpr double kEncodedBreak = kLinearBreak * kLinearSlope;

constexpr double kDomainSlack = 1e-9;

double CheckUnit(double v, const char* what) {
  if (!(v >= -kDomainSlack && v <= 1.0 + kDomainSlack)) {
    throw Error(ErrorCode::kDomain,
                std::string(what) + ": value outside [0,1]: " + std::to_string(v));
  }
  return std::clamp(v, 0.0, 1.0);
}

std::array<double, 3> Apply(const Mat3& m, const std::array<double, 3>& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

std::array<double, 3> ToDouble(const Rgb& p) { return {p[0], p[1], p[2]}; }

float Clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

}  // namespace

Mat3 Multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      out[i][j] = s;
    }
  }
  return out;
}

Mat3 Invert(const Mat3& a) {
  const double c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  const double c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  const double det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
  if (std::abs(det) < 1e-12) {
    throw Error(ErrorCode::kDomain, "singular 3x3 matrix");
  }
  const double inv = 1.0 / det;
  Mat3 out{};
  out[0][0] = c00 * inv;
  out[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv;
  out[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv;
  out[1][0] = c01 * inv;
  out[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv;
  out[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv;
  out[2][0] = c02 * inv;
  out[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv;
  out[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv;
  return out;
}

ColorTransform::ColorTransform() : m_(kProPhotoToSrgb), m_inv_(Invert(m_)) {
  const Mat3 id = Multiply(m_, m_inv_);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(id[i][j] - (i == j ? 1.0 : 0.0)) >= 1e-6) {
        throw Error(ErrorCode::kDomain, "ProPhoto matrix inverse check failed");
      }
    }
  }
}

const ColorTransform& ColorTransform::Get() {
  static const ColorTransform instance;
  return instance;
}

std::array<double, 3> ColorTransform::ToLinearSrgb(
    const std::array<double, 3>& prophoto) const {
  return Apply(m_, prophoto);
}

std::array<double, 3> ColorTransform::ToProPhoto(
    const std::array<double, 3>& linear_srgb) const {
  return Apply(m_inv_, linear_srgb);
}

double GammaEncode(double linear) {
  const double v = CheckUnit(linear, "GammaEncode");
  if (v <= kLinearBreak) return kLinearSlope * v;
  return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double GammaDecode(double encoded) {
  const double v = CheckUnit(encoded, "GammaDecode");
  if (v <= kEncodedBreak) return v / kLinearSlope;
  return std::pow((v + 0.055) / 1.055, 2.4);
}

float QuantizeTo8Bit(float v) {
  const double q = std::floor(static_cast<double>(v) * 255.0 + 0.5);
  return static_cast<float>(std::clamp(q, 0.0, 255.0) / 255.0);
}

GamutReduction ReduceGamut(const LinearRgbImage& img, bool quantize) {
  const ColorTransform& ct = ColorTransform::Get();
  const size_t w = img.width(), h = img.height();
  GamutReduction out{SrgbImage(w, h, quantize), GamutMask(w, h), {}};
  for (size_t i = 0; i < img.pixel_count(); ++i) {
    const auto lin = ct.ToLinearSrgb(ToDouble(img.pixel(i)));
    bool og = false;
    Rgb enc{};
    for (int c = 0; c < 3; ++c) {
      if (lin[c] < 0.0 || lin[c] > 1.0) og = true;
      const float e = static_cast<float>(GammaEncode(std::clamp(lin[c], 0.0, 1.0)));
      enc[c] = quantize ? QuantizeTo8Bit(e) : e;
    }
    out.mask.set(i, og);
    out.srgb.set_pixel(i, enc);
  }
  out.clipped_prophoto = ExpandGamutNaive(out.srgb);
  return out;
}

LinearRgbImage ExpandGamutNaive(const SrgbImage& img) {
  const ColorTransform& ct = ColorTransform::Get();
  LinearRgbImage out(img.width(), img.height());
  for (size_t i = 0; i < img.pixel_count(); ++i) {
    const Rgb p = img.pixel(i);
    const auto pp = ct.ToProPhoto(
        {GammaDecode(p[0]), GammaDecode(p[1]), GammaDecode(p[2])});
    out.set_pixel(i, {Clamp01(pp[0]), Clamp01(pp[1]), Clamp01(pp[2])});
  }
  return out;
}

double SoftClipValue(double v, double low_min, double high_max) {
  if (high_max > 0.9 && v > 0.9) {
    return 0.9 + (v - 0.9) * (0.1 / (high_max - 0.9));
  }
  if (low_min < 0.0 && v < 0.1) {
    return (v - low_min) * (0.1 / (0.1 - low_min));
  }
  return v;
}

double SoftClipExpandValue(double v, double low_min, double high_max) {
  if (high_max > 0.9 && v > 0.9) {
    return 0.9 + (v - 0.9) * ((high_max - 0.9) / 0.1);
  }
  if (low_min < 0.0 && v < 0.1) {
    return low_min + v * ((0.1 - low_min) / 0.1);
  }
  return v;
}

SoftClipResult SoftClip(const LinearRgbImage& img, bool quantize) {
  const ColorTransform& ct = ColorTransform::Get();
  const size_t n = img.pixel_count();
  std::vector<std::array<double, 3>> lin(n);
  SoftClipResult out{SrgbImage(img.width(), img.height(), quantize),
                     GamutMask(img.width(), img.height()),
                     {}};
  out.knees.high_max = {-1e300, -1e300, -1e300};
  out.knees.low_min = {1e300, 1e300, 1e300};
  for (size_t i = 0; i < n; ++i) {
    lin[i] = ct.ToLinearSrgb(ToDouble(img.pixel(i)));
    bool og = false;
    for (int c = 0; c < 3; ++c) {
      out.knees.high_max[c] = std::max(out.knees.high_max[c], lin[i][c]);
      out.knees.low_min[c] = std::min(out.knees.low_min[c], lin[i][c]);
      if (lin[i][c] < 0.0 || lin[i][c] > 1.0) og = true;
    }
    out.mask.set(i, og);
  }
  for (size_t i = 0; i < n; ++i) {
    Rgb enc{};
    for (int c = 0; c < 3; ++c) {
      const double s =
          SoftClipValue(lin[i][c], out.knees.low_min[c], out.knees.high_max[c]);
      const float e = static_cast<float>(GammaEncode(std::clamp(s, 0.0, 1.0)));
      enc[c] = quantize ? QuantizeTo8Bit(e) : e;
    }
    out.srgb.set_pixel(i, enc);
  }
  return out;
}

LinearRgbImage SoftClipExpand(const SrgbImage& img, const SoftClipKnees& knees) {
  const ColorTransform& ct = ColorTransform::Get();
  LinearRgbImage out(img.width(), img.height());
  for (size_t i = 0; i < img.pixel_count(); ++i) {
    const Rgb p = img.pixel(i);
    std::array<double, 3> lin{};
    for (int c = 0; c < 3; ++c) {
      lin[c] = SoftClipExpandValue(GammaDecode(p[c]), knees.low_min[c],
                                   knees.high_max[c]);
    }
    const auto pp = ct.ToProPhoto(lin);
    out.set_pixel(i, {Clamp01(pp[0]), Clamp01(pp[1]), Clamp01(pp[2])});
  }
  return out;
}

}  // namespace widegamut
