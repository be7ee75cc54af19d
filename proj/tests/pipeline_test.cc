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

#include "widegamut/pipeline.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"
#include "widegamut/colorspace.h"
#include "widegamut/error.h"
#include "widegamut/metrics.h"
#include "widegamut/png_io.h"
#include "widegamut/synthetic.h"

namespace widegamut {
namespace {

LinearRgbImage Synthetic(size_t size, uint64_t seed) {
  SyntheticOptions o;
  o.width = o.height = size;
  o.seed = seed;
  return SyntheticImage(o);
}

TrainConfig Config(size_t iterations) {
  TrainConfig c;
  c.iterations = iterations;
  c.seed = 3;
  return c;
}

TEST(PipelineTest, RecoveryMatchesReductionTimeValidation) {
  const LinearRgbImage img = Synthetic(40, 1);
  const ReductionResult red = ReduceAndEmbed(img, Config(100));
  const ExpansionResult exp = ExpandAndRecover(red.png);
  EXPECT_EQ(exp.params, red.params);
  EXPECT_EQ(exp.recovered, red.validation);
  EXPECT_EQ(exp.clipped, red.clipped);
  EXPECT_EQ(exp.dims.width, 40u);
  EXPECT_EQ(red.payload.size(), 20124u);
}

TEST(PipelineTest, SidecarPayloadGivesSameRecovery) {
  const LinearRgbImage img = Synthetic(24, 2);
  const ReductionResult red = ReduceAndEmbed(img, Config(20));
  const Bytes bare = EncodeSrgbPng(red.srgb);
  EXPECT_EQ(ExpandWithPayload(bare, red.payload).recovered, red.validation);
}

TEST(PipelineTest, ZeroWeightPayloadEqualsNaiveExpansion) {
  const LinearRgbImage img = Synthetic(32, 3);
  const ReductionResult red = ReduceAndEmbed(img, Config(0), nullptr, /*zero_init=*/true);
  const ExpansionResult exp = ExpandAndRecover(red.png);
  EXPECT_EQ(exp.recovered, ExpandGamutNaive(SrgbFromPng(DecodePng(red.png))));
}

TEST(PipelineTest, MissingPayloadIsAnExplicitError) {
  const Bytes png = EncodeSrgbPng(ReduceGamut(Synthetic(8, 1), true).srgb);
  try {
    ExpandAndRecover(png);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingMetadata);
  }
}

TEST(PipelineTest, PayloadForOtherDimensionsIsRejected) {
  const ReductionResult red = ReduceAndEmbed(Synthetic(16, 1), Config(1));
  const Bytes other = EncodeSrgbPng(ReduceGamut(Synthetic(8, 1), true).srgb);
  try {
    ExpandWithPayload(other, red.payload);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(PipelineTest, DeterministicBytes) {
  const LinearRgbImage img = Synthetic(32, 4);
  const ReductionResult a = ReduceAndEmbed(img, Config(50));
  const ReductionResult b = ReduceAndEmbed(img, Config(50));
  EXPECT_EQ(a.png, b.png);
  EXPECT_EQ(EncodeProPhotoPng(ExpandAndRecover(a.png).recovered),
            EncodeProPhotoPng(ExpandAndRecover(b.png).recovered));
}

TEST(PipelineTest, InGamutImageStaysWithinQuantizationBound) {
  // Draw linear sRGB well inside the cube so every pixel is in gamut.
  LinearRgbImage img(32, 32);
  Rng rng(5);
  const ColorTransform& t = ColorTransform::Get();
  for (size_t i = 0; i < img.pixel_count(); ++i) {
    const auto p = t.ToProPhoto({0.25 + 0.3 * rng.Unit(), 0.25 + 0.3 * rng.Unit(),
                                 0.25 + 0.3 * rng.Unit()});
    img.set_pixel(i, {static_cast<float>(p[0]), static_cast<float>(p[1]),
                      static_cast<float>(p[2])});
  }
  const ReductionResult red = ReduceAndEmbed(img, Config(9000));
  EXPECT_TRUE(red.no_out_of_gamut);
  const LinearRgbImage rec = ExpandAndRecover(red.png).recovered;
  // max |M^-1| row sum * steepest de-gamma slope * half an 8-bit step
  const double bound = 1.000172 * (2.4 / 1.055) * 0.5 / 255.0;
  double worst = 0.0;
  for (size_t i = 0; i < img.values().size(); ++i) {
    worst = std::max(worst, static_cast<double>(std::abs(rec.values()[i] - img.values()[i])));
  }
  EXPECT_LE(worst, bound);
  EXPECT_EQ(red.stats.iterations, 9000u);
}

TEST(PipelineTest, MetaInitUsesGivenParameters) {
  const LinearRgbImage img = Synthetic(16, 6);
  const MlpParams init = testing::RandomParams(32, EncoderConfig{}, 2, 0.05);
  const ReductionResult red = ReduceAndEmbed(img, Config(0), &init);
  EXPECT_EQ(red.params, init);
}

TEST(PipelineTest, SyntheticImageBeatsClipBaselineBySixDecibels) {
  const LinearRgbImage img = Synthetic(256, 1);
  const ReductionResult red = ReduceAndEmbed(img, Config(9000));
  ASSERT_GE(red.mask.OutOfGamutFraction(), 0.10);
  const QualityReport clip = Evaluate(red.clipped, img, red.mask);
  const QualityReport mlp = Evaluate(ExpandAndRecover(red.png).recovered, img, red.mask);
  EXPECT_GE(*mlp.psnr_og, *clip.psnr_og + 6.0);
  EXPECT_LT(red.stats.final_loss, red.stats.initial_loss);
}

}  // namespace
}  // namespace widegamut
