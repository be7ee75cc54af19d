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

// ProPhoto <-> sRGB conversion with absolute-colorimetric clipping.
//
// ProPhoto pixels are treated as linear light: the 3x3 matrix is applied to
// stored values directly, with no ProPhoto 1.8 transfer curve in between.

#ifndef WIDEGAMUT_COLORSPACE_H_
#define WIDEGAMUT_COLORSPACE_H_

#include <array>

#include "widegamut/image.h"

namespace widegamut {

using Mat3 = std::array<std::array<double, 3>, 3>;

// ProPhoto (D50) -> linear sRGB (D65), CAT02 adaptation folded in.
class ColorTransform {
 public:
  // The process-wide instance; the inverse is computed and checked once.
  static const ColorTransform& Get();

  const Mat3& m() const { return m_; }
  const Mat3& m_inv() const { return m_inv_; }

  std::array<double, 3> ToLinearSrgb(const std::array<double, 3>& prophoto) const;
  std::array<double, 3> ToProPhoto(const std::array<double, 3>& linear_srgb) const;

 private:
  ColorTransform();
  Mat3 m_;
  Mat3 m_inv_;
};

Mat3 Multiply(const Mat3& a, const Mat3& b);
Mat3 Invert(const Mat3& a);

// IEC 61966-2-1 transfer function. Throws Error(kDomain) outside [0,1]
// (with 1e-9 slack; values inside the slack are clamped).
double GammaEncode(double linear);
double GammaDecode(double encoded);

// Rounds half-up onto the k/255 grid.
float QuantizeTo8Bit(float v);

struct GamutReduction {
  SrgbImage srgb;
  GamutMask mask;
  // M^-1 g^-1(srgb): what a standard decoder reconstructs.
  LinearRgbImage clipped_prophoto;
};

// g(clip(M * img)), optionally quantized, plus the out-of-gamut mask and
// the clipped ProPhoto image recovered from the (quantized) sRGB.
GamutReduction ReduceGamut(const LinearRgbImage& img, bool quantize);

// M^-1 g^-1(img), clamped to the unit range of ProPhoto storage.
LinearRgbImage ExpandGamutNaive(const SrgbImage& img);

// Per-channel knee parameters recorded by SoftClip. A channel's high knee is
// active when high_max > 0.9 and maps [0.9, high_max] onto [0.9, 1]. Its low
// knee is active when low_min < 0 and maps [low_min, 0.1] onto [0, 0.1].
struct SoftClipKnees {
  std::array<double, 3> high_max{1.0, 1.0, 1.0};
  std::array<double, 3> low_min{0.0, 0.0, 0.0};
};

struct SoftClipResult {
  SrgbImage srgb;
  GamutMask mask;
  SoftClipKnees knees;
};

double SoftClipValue(double v, double low_min, double high_max);
double SoftClipExpandValue(double v, double low_min, double high_max);

SoftClipResult SoftClip(const LinearRgbImage& img, bool quantize = false);
LinearRgbImage SoftClipExpand(const SrgbImage& img, const SoftClipKnees& knees);

}  // namespace widegamut

#endif  // WIDEGAMUT_COLORSPACE_H_
