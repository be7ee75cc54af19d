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

// Residual-predicting MLP: features -> ReLU(hidden) -> ReLU(hidden) -> 3,
// with the network output added to the clipped color.

#ifndef WIDEGAMUT_MLP_H_
#define WIDEGAMUT_MLP_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "widegamut/encoder.h"
#include "widegamut/kernels.h"

namespace widegamut {

inline constexpr size_t kLayerCount = 3;
inline constexpr size_t kOutputDim = 3;

struct LayerShape {
  size_t in = 0;
  size_t out = 0;
  size_t weight_offset = 0;  // into the flat parameter vector
  size_t bias_offset = 0;
};

// Layer geometry for a given input width and hidden size. Parameters are laid
// out flat in the order W1, b1, W2, b2, W3, b3, each weight row-major
// (out x in).
struct MlpShape {
  size_t input_dim = 0;
  size_t hidden = 0;

  MlpShape() = default;
  MlpShape(size_t input_dim, size_t hidden) : input_dim(input_dim), hidden(hidden) {}

  std::array<LayerShape, kLayerCount> layers() const;
  size_t param_count() const;

  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

template <typename T>
struct BasicMlpParams {
  EncoderConfig encoder;
  size_t hidden = 0;
  std::vector<T> values;

  MlpShape shape() const { return MlpShape(encoder.feature_dim(), hidden); }

  std::span<T> weights(size_t layer) {
    const LayerShape l = shape().layers()[layer];
    return std::span<T>(values).subspan(l.weight_offset, l.in * l.out);
  }
  std::span<const T> weights(size_t layer) const {
    const LayerShape l = shape().layers()[layer];
    return std::span<const T>(values).subspan(l.weight_offset, l.in * l.out);
  }
  std::span<T> bias(size_t layer) {
    const LayerShape l = shape().layers()[layer];
    return std::span<T>(values).subspan(l.bias_offset, l.out);
  }
  std::span<const T> bias(size_t layer) const {
    const LayerShape l = shape().layers()[layer];
    return std::span<const T>(values).subspan(l.bias_offset, l.out);
  }

  friend bool operator==(const BasicMlpParams&, const BasicMlpParams&) = default;
};

using MlpParams = BasicMlpParams<float>;
// 64-bit twin, used only for gradient checking.
using MlpParams64 = BasicMlpParams<double>;

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights, zero biases.
MlpParams InitParams(size_t hidden, const EncoderConfig& encoder, uint64_t seed);
// All-zero parameters; the residual is identically zero.
MlpParams ZeroParams(size_t hidden, const EncoderConfig& encoder);

MlpParams64 ToDouble(const MlpParams& p);

// Throws Error(kDimensionMismatch) if the flat vector does not match the
// declared shape.
template <typename T>
void ValidateParams(const BasicMlpParams<T>& p);

// A batch of training or inference samples. Row-major:
// features n x input_dim, base (clipped colors) n x 3, targets n x 3.
template <typename T>
struct BasicBatch {
  size_t size = 0;
  std::span<const T> features;
  std::span<const T> base;
  std::span<const T> targets;
};

using Batch = BasicBatch<float>;
using Batch64 = BasicBatch<double>;

// Forward/backward engine with reusable activation buffers. The float engine
// runs on a DenseKernels table (Active() by default); the double engine
// always uses the reference kernels.
template <typename T>
class BasicMlpEngine {
 public:
  BasicMlpEngine();
  explicit BasicMlpEngine(const kernels::DenseKernels& k);

  // out = f(features) + base, n x 3 (no clamping).
  void Predict(const BasicMlpParams<T>& params, size_t n,
               std::span<const T> features, std::span<const T> base,
               std::span<T> out);

  // Sum over the batch of squared prediction error; grads (same layout as
  // params.values) are overwritten with its exact gradient.
  double LossAndGrads(const BasicMlpParams<T>& params, const BasicBatch<T>& batch,
                      std::span<T> grads);

  // Loss only.
  double Loss(const BasicMlpParams<T>& params, const BasicBatch<T>& batch);

 private:
  void RunForward(const BasicMlpParams<T>& params, size_t n,
                  std::span<const T> features);

  const kernels::DenseKernels* kernels_ = nullptr;
  std::vector<T> wt_[kLayerCount];
  std::vector<T> h1_, h2_, out_, d3_, d2_, d1_;
};

using MlpEngine = BasicMlpEngine<float>;
using MlpEngine64 = BasicMlpEngine<double>;

}  // namespace widegamut

#endif  // WIDEGAMUT_MLP_H_
