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

// The SIMD kernels must agree with the scalar reference to float rounding,
// for every shape the MLP uses and for awkward remainders.

#include "widegamut/kernels.h"

#include <cmath>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "widegamut/random.h"

namespace widegamut::kernels {
namespace {

std::vector<float> Random(size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<float> v(n);
  for (float& x : v) x = static_cast<float>(rng.Uniform(lo, hi));
  return v;
}

std::vector<float> Transpose(const std::vector<float>& w, size_t rows, size_t cols) {
  std::vector<float> t(w.size());
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) t[c * rows + r] = w[r * cols + c];
  }
  return t;
}

// Accumulations of `terms` products in different orders differ by a few ulps
// of the magnitude sum; this bound is loose enough for reassociation and FMA.
void ExpectClose(const std::vector<float>& a, const std::vector<float>& b, size_t terms) {
  ASSERT_EQ(a.size(), b.size());
  const float tol = 1e-6f * static_cast<float>(terms) + 1e-6f;
  for (size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], tol) << i;
}

TEST(KernelsTest, ActiveIsAvailable) {
  EXPECT_FALSE(Active().name.empty());
  EXPECT_EQ(Scalar().name, "scalar");
}

TEST(KernelsTest, ScalarMatchesGenericReference) {
  Rng rng(1);
  const size_t batch = 9, in = 13, out = 7;
  const auto x = Random(batch * in, rng), w = Random(out * in, rng), b = Random(out, rng);
  std::vector<float> y1(batch * out), y2(batch * out);
  Scalar().forward(x.data(), batch, in, w.data(), Transpose(w, out, in).data(), b.data(), out,
                   true, y1.data());
  ForwardRef(x.data(), batch, in, w.data(), b.data(), out, true, y2.data());
  EXPECT_EQ(y1, y2);
}

class SimdEquivalenceTest
    : public ::testing::TestWithParam<std::tuple<size_t, size_t, size_t>> {
 protected:
  void SetUp() override {
    simd_ = Avx2();
    if (simd_ == nullptr) GTEST_SKIP() << "AVX2 kernels unavailable on this CPU";
  }
  const DenseKernels* simd_ = nullptr;
};

TEST_P(SimdEquivalenceTest, Forward) {
  const auto [batch, in, out] = GetParam();
  Rng rng(batch * 131 + in * 7 + out);
  const auto x = Random(batch * in, rng), w = Random(out * in, rng), b = Random(out, rng);
  const auto wt = Transpose(w, out, in);
  for (bool relu : {false, true}) {
    std::vector<float> ref(batch * out), got(batch * out);
    Scalar().forward(x.data(), batch, in, w.data(), wt.data(), b.data(), out, relu, ref.data());
    simd_->forward(x.data(), batch, in, w.data(), wt.data(), b.data(), out, relu, got.data());
    ExpectClose(ref, got, in);
  }
}

TEST_P(SimdEquivalenceTest, GradWeights) {
  const auto [batch, in, out] = GetParam();
  Rng rng(batch * 17 + in * 3 + out);
  const auto x = Random(batch * in, rng), d = Random(batch * out, rng);
  // Start from nonzero accumulators: the kernel adds into them.
  const auto gw0 = Random(out * in, rng), gb0 = Random(out, rng);
  auto gw_ref = gw0, gw = gw0;
  auto gb_ref = gb0, gb = gb0;
  Scalar().grad_weights(x.data(), d.data(), batch, in, out, gw_ref.data(), gb_ref.data());
  simd_->grad_weights(x.data(), d.data(), batch, in, out, gw.data(), gb.data());
  ExpectClose(gw_ref, gw, batch);
  ExpectClose(gb_ref, gb, batch);
}

TEST_P(SimdEquivalenceTest, BackpropRelu) {
  const auto [batch, in, out] = GetParam();
  Rng rng(batch * 5 + in * 11 + out);
  const auto d = Random(batch * out, rng), w = Random(out * in, rng);
  // Activations with a mix of exact zeros and positives, as after ReLU.
  auto act = Random(batch * in, rng);
  for (float& a : act) a = a < 0.0f ? 0.0f : a;
  std::vector<float> ref(batch * in), got(batch * in);
  Scalar().backprop_relu(d.data(), w.data(), batch, out, in, act.data(), ref.data());
  simd_->backprop_relu(d.data(), w.data(), batch, out, in, act.data(), got.data());
  ExpectClose(ref, got, out);
  for (size_t i = 0; i < act.size(); ++i) {
    if (act[i] == 0.0f) {
      ASSERT_EQ(got[i], 0.0f);
    }
  }
}

// (batch, in, out): the MLP's layer shapes plus odd sizes that exercise
// every remainder path.
INSTANTIATE_TEST_SUITE_P(
    Shapes, SimdEquivalenceTest,
    ::testing::Values(std::make_tuple(1, 1, 1), std::make_tuple(3, 5, 32),
                      std::make_tuple(64, 120, 32), std::make_tuple(257, 120, 32),
                      std::make_tuple(64, 32, 32), std::make_tuple(513, 32, 3),
                      std::make_tuple(7, 48, 16), std::make_tuple(9, 72, 64),
                      std::make_tuple(5, 120, 128), std::make_tuple(11, 13, 9),
                      std::make_tuple(300, 17, 25), std::make_tuple(2, 3, 7)));

TEST(KernelsTest, PerSampleResultsIndependentOfBatchSplit) {
  const DenseKernels& k = Active();
  Rng rng(3);
  const size_t batch = 37, in = 120, out = 32;
  const auto x = Random(batch * in, rng), w = Random(out * in, rng), b = Random(out, rng);
  const auto wt = Transpose(w, out, in);
  std::vector<float> whole(batch * out);
  k.forward(x.data(), batch, in, w.data(), wt.data(), b.data(), out, true, whole.data());
  for (size_t s = 0; s < batch; ++s) {
    std::vector<float> one(out);
    k.forward(x.data() + s * in, 1, in, w.data(), wt.data(), b.data(), out, true, one.data());
    for (size_t j = 0; j < out; ++j) ASSERT_EQ(one[j], whole[s * out + j]) << s;
  }
}

}  // namespace
}  // namespace widegamut::kernels
