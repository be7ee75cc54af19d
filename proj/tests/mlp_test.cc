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

#include "widegamut/mlp.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"
#include "widegamut/error.h"

namespace widegamut {
namespace {

struct BatchData {
  std::vector<double> features, base, targets;
  Batch64 View(size_t n) const { return Batch64{n, features, base, targets}; }
};

BatchData RandomBatch(size_t n, size_t dim, Rng& rng) {
  BatchData b;
  b.features.resize(n * dim);
  b.base.resize(n * 3);
  b.targets.resize(n * 3);
  for (double& v : b.features) v = rng.Uniform(-1, 1);
  for (double& v : b.base) v = rng.Unit();
  for (double& v : b.targets) v = rng.Unit();
  return b;
}

// Central differences over every parameter; returns the worst relative error.
double GradientCheck(const MlpParams64& params, const Batch64& batch) {
  MlpEngine64 engine;
  std::vector<double> grads(params.values.size());
  engine.LossAndGrads(params, batch, grads);
  constexpr double h = 1e-5;
  MlpParams64 p = params;
  double worst = 0.0;
  for (size_t i = 0; i < p.values.size(); ++i) {
    const double orig = p.values[i];
    p.values[i] = orig + h;
    const double up = engine.Loss(p, batch);
    p.values[i] = orig - h;
    const double down = engine.Loss(p, batch);
    p.values[i] = orig;
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(numeric), std::abs(grads[i]), 1e-6});
    worst = std::max(worst, std::abs(numeric - grads[i]) / scale);
  }
  return worst;
}

TEST(MlpShapeTest, ParameterCounts) {
  EXPECT_EQ(MlpShape(120, 32).param_count(), 5027u);
  EXPECT_EQ(MlpShape(120, 16).param_count(), 2259u);
  for (size_t in : {2u, 5u, 48u, 72u, 120u}) {
    for (size_t h : {1u, 16u, 32u, 64u, 128u}) {
      EXPECT_EQ(MlpShape(in, h).param_count(), in * h + h + h * h + h + h * 3 + 3);
    }
  }
}

TEST(MlpShapeTest, LayoutIsW1B1W2B2W3B3) {
  const auto l = MlpShape(120, 32).layers();
  EXPECT_EQ(l[0].weight_offset, 0u);
  EXPECT_EQ(l[0].bias_offset, 120u * 32);
  EXPECT_EQ(l[1].weight_offset, 120u * 32 + 32);
  EXPECT_EQ(l[1].bias_offset, 120u * 32 + 32 + 32 * 32);
  EXPECT_EQ(l[2].weight_offset, 120u * 32 + 32 + 32 * 32 + 32);
  EXPECT_EQ(l[2].bias_offset, 5027u - 3);
  EXPECT_EQ(l[2].out, 3u);
}

TEST(InitParamsTest, DeterministicBoundedZeroBias) {
  const EncoderConfig enc;
  const MlpParams a = InitParams(32, enc, 42);
  const MlpParams b = InitParams(32, enc, 42);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, InitParams(32, enc, 43));
  EXPECT_EQ(a.values.size(), 5027u);
  for (size_t l = 0; l < kLayerCount; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(a.shape().layers()[l].in));
    for (float w : a.weights(l)) EXPECT_LE(std::abs(w), bound);
    for (float v : a.bias(l)) EXPECT_EQ(v, 0.0f);
  }
}

TEST(ValidateParamsTest, RejectsWrongLength) {
  MlpParams p = ZeroParams(32, EncoderConfig{});
  p.values.pop_back();
  try {
    ValidateParams(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(MlpEngineTest, ZeroParamsReturnBase) {
  Rng rng(1);
  const MlpParams p = ZeroParams(32, EncoderConfig{});
  const size_t n = 50;
  std::vector<float> f(n * 120), base(n * 3), out(n * 3);
  for (float& v : f) v = static_cast<float>(rng.Uniform(-1, 1));
  for (float& v : base) v = static_cast<float>(rng.Unit());
  MlpEngine engine;
  engine.Predict(p, n, f, base, out);
  EXPECT_EQ(out, base);
}

TEST(MlpEngineTest, FeatureSizeMismatchThrows) {
  const MlpParams p = ZeroParams(32, EncoderConfig{});
  std::vector<float> f(119), base(3), out(3);
  MlpEngine engine;
  EXPECT_THROW(engine.Predict(p, 1, f, base, out), Error);
}

TEST(MlpEngineTest, PerfectPredictionHasZeroLossAndGrads) {
  Rng rng(2);
  const MlpParams p = testing::RandomParams(16, EncoderConfig{3, InputMode::kXYRGB}, 5);
  const size_t n = 20, dim = 30;
  std::vector<float> f(n * dim), base(n * 3), pred(n * 3);
  for (float& v : f) v = static_cast<float>(rng.Uniform(-1, 1));
  for (float& v : base) v = static_cast<float>(rng.Unit());
  MlpEngine engine;
  engine.Predict(p, n, f, base, pred);
  std::vector<float> grads(p.values.size(), 1.0f);
  EXPECT_EQ(engine.LossAndGrads(p, Batch{n, f, base, pred}, grads), 0.0);
  for (float g : grads) EXPECT_EQ(g, 0.0f);
}

TEST(MlpEngineTest, AnalyticGradientsMatchFiniteDifferences) {
  Rng rng(11);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const EncoderConfig enc{1 + draw % 3, static_cast<InputMode>(draw % 3)};
    const size_t hidden = 4 + draw % 5;
    const MlpParams64 p = ToDouble(testing::RandomParams(hidden, enc, 1000 + draw, 0.8));
    const size_t n = 1 + draw % 6;
    const BatchData b = RandomBatch(n, enc.feature_dim(), rng);
    worst = std::max(worst, GradientCheck(p, b.View(n)));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(MlpEngineTest, FullSizeGradientsMatchFiniteDifferences) {
  Rng rng(12);
  const MlpParams64 p = ToDouble(InitParams(32, EncoderConfig{}, 3));
  const BatchData b = RandomBatch(4, 120, rng);
  EXPECT_LT(GradientCheck(p, b.View(4)), 1e-4);
}

TEST(MlpEngineTest, DuplicatingBatchDoublesLossAndGrads) {
  Rng rng(4);
  const EncoderConfig enc{2, InputMode::kXYRGB};
  const MlpParams64 p = ToDouble(testing::RandomParams(8, enc, 9));
  const size_t n = 5, dim = enc.feature_dim();
  const BatchData b = RandomBatch(n, dim, rng);
  BatchData d = b;
  d.features.insert(d.features.end(), b.features.begin(), b.features.end());
  d.base.insert(d.base.end(), b.base.begin(), b.base.end());
  d.targets.insert(d.targets.end(), b.targets.begin(), b.targets.end());
  MlpEngine64 engine;
  std::vector<double> g1(p.values.size()), g2(p.values.size());
  const double l1 = engine.LossAndGrads(p, b.View(n), g1);
  const double l2 = engine.LossAndGrads(p, d.View(2 * n), g2);
  EXPECT_DOUBLE_EQ(l2, 2 * l1);
  for (size_t i = 0; i < g1.size(); ++i) EXPECT_NEAR(g2[i], 2 * g1[i], 1e-12 * (1 + std::abs(g1[i])));
}

TEST(MlpEngineTest, FloatEngineTracksDoubleEngine) {
  Rng rng(6);
  const EncoderConfig enc;
  const MlpParams p = InitParams(32, enc, 8);
  const size_t n = 64;
  const BatchData b = RandomBatch(n, 120, rng);
  std::vector<float> f(b.features.begin(), b.features.end());
  std::vector<float> base(b.base.begin(), b.base.end());
  std::vector<float> tgt(b.targets.begin(), b.targets.end());
  MlpEngine ef;
  MlpEngine64 ed;
  std::vector<float> gf(p.values.size());
  std::vector<double> gd(p.values.size());
  const double lf = ef.LossAndGrads(p, Batch{n, f, base, tgt}, gf);
  const double ld = ed.LossAndGrads(ToDouble(p), b.View(n), gd);
  EXPECT_NEAR(lf, ld, 1e-4 * ld);
  for (size_t i = 0; i < gf.size(); ++i) ASSERT_NEAR(gf[i], gd[i], 1e-4 * (1 + std::abs(gd[i])));
}

TEST(MlpEngineTest, ScalarAndActiveKernelsAgree) {
  Rng rng(7);
  const MlpParams p = InitParams(32, EncoderConfig{}, 1);
  const size_t n = 300;
  std::vector<float> f(n * 120), base(n * 3), tgt(n * 3);
  for (float& v : f) v = static_cast<float>(rng.Uniform(-1, 1));
  for (float& v : base) v = static_cast<float>(rng.Unit());
  for (float& v : tgt) v = static_cast<float>(rng.Unit());
  MlpEngine scalar(kernels::Scalar());
  MlpEngine active;
  std::vector<float> gs(p.values.size()), ga(p.values.size());
  const double ls = scalar.LossAndGrads(p, Batch{n, f, base, tgt}, gs);
  const double la = active.LossAndGrads(p, Batch{n, f, base, tgt}, ga);
  EXPECT_NEAR(ls, la, 1e-5 * ls);
  for (size_t i = 0; i < gs.size(); ++i) ASSERT_NEAR(gs[i], ga[i], 1e-3 * (1 + std::abs(gs[i])));
}

}  // namespace
}  // namespace widegamut
