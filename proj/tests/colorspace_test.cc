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

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"
#include "widegamut/error.h"

namespace widegamut {
namespace {

// Independent IEC 61966-2-1 transfer curve, written out from the standard.
double OracleEncode(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

// Largest error a quantized in-gamut round trip can show: half an 8-bit step,
// amplified by the steepest de-gamma slope and the largest |M^-1| row sum.
double QuantizedRoundTripBound() {
  const Mat3& inv = ColorTransform::Get().m_inv();
  double row = 0.0;
  for (const auto& r : inv) {
    row = std::max(row, std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]));
  }
  const double slope = 2.4 / 1.055;  // d/dv of ((v+0.055)/1.055)^2.4 at v=1
  return row * slope * 0.5 / 255.0;
}

TEST(ColorTransformTest, MatrixMatchesPublishedValues) {
  const double expected[3][3] = {{2.0365, -0.7376, -0.2993},
                                 {-0.2257, 1.2232, 0.0027},
                                 {-0.0105, -0.1349, 1.1452}};
  const Mat3& m = ColorTransform::Get().m();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(m[r][c], expected[r][c], 5e-5);
  }
}

TEST(ColorTransformTest, InverseTimesMatrixIsIdentity) {
  const ColorTransform& ct = ColorTransform::Get();
  const Mat3 id = Multiply(ct.m(), ct.m_inv());
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(id[r][c], r == c ? 1.0 : 0.0, 1e-6);
  }
  const Mat3 id2 = Multiply(ct.m_inv(), ct.m());
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(id2[r][c], r == c ? 1.0 : 0.0, 1e-6);
  }
}

TEST(ColorTransformTest, InvertRejectsSingularMatrix) {
  const Mat3 singular = {{{1, 2, 3}, {2, 4, 6}, {0, 0, 1}}};
  EXPECT_THROW(Invert(singular), Error);
}

TEST(GammaTest, FixedPoints) {
  EXPECT_EQ(GammaEncode(0.0), 0.0);
  EXPECT_NEAR(GammaEncode(1.0), 1.0, 1e-15);
  EXPECT_EQ(GammaDecode(0.0), 0.0);
  EXPECT_NEAR(GammaDecode(1.0), 1.0, 1e-15);
}

TEST(GammaTest, BreakpointValues) {
  EXPECT_NEAR(GammaEncode(0.0031308), 0.04044994, 1e-8);
  EXPECT_NEAR(GammaDecode(0.04044994), 0.0031308, 1e-8);
}

TEST(GammaTest, MatchesIndependentFormula) {
  for (int i = 0; i <= 1000; ++i) {
    const double v = i / 1000.0;
    EXPECT_NEAR(GammaEncode(v), OracleEncode(v), 1e-12) << v;
  }
}

TEST(GammaTest, MutualInversesOnDenseGridAndStrictlyIncreasing) {
  double prev_enc = -1.0, prev_dec = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double v = i / 10000.0;
    const double e = GammaEncode(v);
    const double d = GammaDecode(v);
    EXPECT_NEAR(GammaDecode(e), v, 1e-9);
    EXPECT_NEAR(GammaEncode(d), v, 1e-9);
    EXPECT_GT(e, prev_enc);
    EXPECT_GT(d, prev_dec);
    prev_enc = e;
    prev_dec = d;
  }
}

TEST(GammaTest, DomainErrors) {
  EXPECT_THROW(GammaEncode(-0.01), Error);
  EXPECT_THROW(GammaEncode(1.01), Error);
  EXPECT_THROW(GammaDecode(-0.01), Error);
  EXPECT_THROW(GammaDecode(1.01), Error);
  try {
    GammaEncode(2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  // Tiny overshoot from float arithmetic is tolerated.
  EXPECT_NO_THROW(GammaEncode(1.0 + 1e-10));
  EXPECT_NO_THROW(GammaDecode(-1e-10));
}

TEST(QuantizeTest, RoundsHalfUpToGrid) {
  EXPECT_EQ(QuantizeTo8Bit(0.0f), 0.0f);
  EXPECT_EQ(QuantizeTo8Bit(1.0f), 1.0f);
  EXPECT_FLOAT_EQ(QuantizeTo8Bit(0.5f), 128.0f / 255.0f);
  EXPECT_FLOAT_EQ(QuantizeTo8Bit(0.4f / 255.0f), 0.0f);
  EXPECT_FLOAT_EQ(QuantizeTo8Bit(0.6f / 255.0f), 1.0f / 255.0f);
}

LinearRgbImage OnePixel(float r, float g, float b) {
  LinearRgbImage img(1, 1);
  img.set_pixel(0, {r, g, b});
  return img;
}

TEST(ReduceGamutTest, BlackStaysBlack) {
  const GamutReduction red = ReduceGamut(OnePixel(0, 0, 0), false);
  EXPECT_EQ(red.srgb.pixel(0), (Rgb{0, 0, 0}));
  EXPECT_FALSE(red.mask[0]);
}

TEST(ReduceGamutTest, ProPhotoWhiteIsSlightlyOutOfGamut) {
  const auto lin = ColorTransform::Get().ToLinearSrgb({1, 1, 1});
  EXPECT_NEAR(lin[0], 0.9996, 1e-4);
  EXPECT_NEAR(lin[1], 1.0002, 1e-4);
  EXPECT_NEAR(lin[2], 0.9998, 1e-4);
  const GamutReduction red = ReduceGamut(OnePixel(1, 1, 1), false);
  EXPECT_TRUE(red.mask[0]);
  for (float v : red.srgb.values()) EXPECT_LE(v, 1.0f);
}

TEST(ReduceGamutTest, PureGreenClipsToSrgbGreen) {
  const auto lin = ColorTransform::Get().ToLinearSrgb({0, 1, 0});
  EXPECT_NEAR(lin[0], -0.7376, 1e-4);
  EXPECT_NEAR(lin[1], 1.2232, 1e-4);
  EXPECT_NEAR(lin[2], -0.1349, 1e-4);
  const GamutReduction red = ReduceGamut(OnePixel(0, 1, 0), false);
  EXPECT_TRUE(red.mask[0]);
  EXPECT_EQ(red.srgb.pixel(0), (Rgb{0, 1, 0}));
}

TEST(ReduceGamutTest, MaskMatchesDefinitionOnRandomImages) {
  const ColorTransform& ct = ColorTransform::Get();
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const LinearRgbImage img = testing::RandomImage(32, 16, seed);
    const GamutReduction red = ReduceGamut(img, true);
    for (size_t i = 0; i < img.pixel_count(); ++i) {
      const Rgb p = img.pixel(i);
      const auto lin = ct.ToLinearSrgb({p[0], p[1], p[2]});
      bool og = false;
      for (double c : lin) og |= c < 0.0 || c > 1.0;
      EXPECT_EQ(static_cast<bool>(red.mask[i]), og);
    }
  }
}

TEST(ReduceGamutTest, QuantizedOutputIsOnGrid) {
  const GamutReduction red = ReduceGamut(testing::RandomImage(16, 16, 9), true);
  EXPECT_TRUE(red.srgb.quantized());
  for (float v : red.srgb.values()) {
    const float k = v * 255.0f;
    EXPECT_NEAR(k, std::round(k), 1e-4);
  }
}

TEST(ReduceGamutTest, ClippedImageIsNaiveExpansionOfOutput) {
  const GamutReduction red = ReduceGamut(testing::RandomImage(8, 8, 3), true);
  EXPECT_EQ(red.clipped_prophoto, ExpandGamutNaive(red.srgb));
}

TEST(ExpandGamutNaiveTest, BlackIsBlack) {
  SrgbImage s(1, 1);
  EXPECT_EQ(ExpandGamutNaive(s).pixel(0), (Rgb{0, 0, 0}));
}

TEST(ExpandGamutNaiveTest, FloatRoundTripIsIdentityInGamut) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LinearRgbImage img = testing::RandomImage(32, 32, seed);
    const GamutReduction red = ReduceGamut(img, false);
    const LinearRgbImage back = ExpandGamutNaive(red.srgb);
    for (size_t i = 0; i < img.pixel_count(); ++i) {
      if (red.mask[i]) continue;
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(back.pixel(i)[c], img.pixel(i)[c], 1e-6);
    }
  }
}

TEST(ExpandGamutNaiveTest, QuantizedRoundTripWithinDerivedBound) {
  const double bound = QuantizedRoundTripBound();
  EXPECT_LT(bound, 5e-3);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LinearRgbImage img = testing::RandomImage(32, 32, 100 + seed);
    const GamutReduction red = ReduceGamut(img, true);
    for (size_t i = 0; i < img.pixel_count(); ++i) {
      if (red.mask[i]) continue;
      for (int c = 0; c < 3; ++c) {
        EXPECT_LE(std::abs(red.clipped_prophoto.pixel(i)[c] - img.pixel(i)[c]), bound + 1e-6);
      }
    }
  }
}

TEST(SoftClipTest, ValueBelowKneeUnchanged) {
  EXPECT_DOUBLE_EQ(SoftClipValue(0.5, 0.0, 1.5), 0.5);
  EXPECT_DOUBLE_EQ(SoftClipExpandValue(0.5, 0.0, 1.5), 0.5);
}

TEST(SoftClipTest, KneeEndpoints) {
  EXPECT_DOUBLE_EQ(SoftClipValue(1.5, 0.0, 1.5), 1.0);
  EXPECT_DOUBLE_EQ(SoftClipExpandValue(1.0, 0.0, 1.5), 1.5);
  EXPECT_DOUBLE_EQ(SoftClipValue(0.9, 0.0, 1.5), 0.9);
}

TEST(SoftClipTest, DegenerateMaximumIsIdentity) {
  EXPECT_DOUBLE_EQ(SoftClipValue(0.95, 0.0, 0.85), 0.95);
  EXPECT_DOUBLE_EQ(SoftClipExpandValue(0.95, 0.0, 0.85), 0.95);
}

TEST(SoftClipTest, FloatRoundTripAndRange) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const LinearRgbImage img = testing::RandomImage(24, 24, 40 + seed);
    const SoftClipResult sc = SoftClip(img);
    for (float v : sc.srgb.values()) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
    const LinearRgbImage back = SoftClipExpand(sc.srgb, sc.knees);
    for (size_t i = 0; i < img.values().size(); ++i) {
      EXPECT_NEAR(back.values()[i], img.values()[i], 1e-6);
    }
  }
}

}  // namespace
}  // namespace widegamut
