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
#include <string>
#include <type_traits>

#include "widegamut/error.h"
#include "widegamut/random.h"

namespace widegamut {

std::array<LayerShape, kLayerCount> MlpShape::layers() const {
  std::array<LayerShape, kLayerCount> l;
  l[0] = {input_dim, hidden, 0, 0};
  l[1] = {hidden, hidden, 0, 0};
  l[2] = {hidden, kOutputDim, 0, 0};
  size_t offset = 0;
  for (LayerShape& s : l) {
    s.weight_offset = offset;
    offset += s.in * s.out;
    s.bias_offset = offset;
    offset += s.out;
  }
  return l;
}

size_t MlpShape::param_count() const {
  const auto l = layers();
  return l[2].bias_offset + l[2].out;
}

MlpParams ZeroParams(size_t hidden, const EncoderConfig& encoder) {
  if (hidden == 0) throw Error(ErrorCode::kInvalidArgument, "hidden size must be positive");
  MlpParams p;
  p.encoder = encoder;
  p.hidden = hidden;
  p.values.assign(p.shape().param_count(), 0.0f);
  return p;
}

MlpParams InitParams(size_t hidden, const EncoderConfig& encoder, uint64_t seed) {
  MlpParams p = ZeroParams(hidden, encoder);
  Rng rng(seed);
  for (size_t layer = 0; layer < kLayerCount; ++layer) {
    auto w = p.weights(layer);
    const size_t fan_in = p.shape().layers()[layer].in;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (float& v : w) v = static_cast<float>(rng.Uniform(-bound, bound));
  }
  return p;
}

MlpParams64 ToDouble(const MlpParams& p) {
  MlpParams64 out;
  out.encoder = p.encoder;
  out.hidden = p.hidden;
  out.values.assign(p.values.begin(), p.values.end());
  return out;
}

template <typename T>
void ValidateParams(const BasicMlpParams<T>& p) {
  if (p.hidden == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "hidden size is zero");
  }
  if (p.values.size() != p.shape().param_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "parameter vector has " + std::to_string(p.values.size()) +
                    " entries, shape needs " +
                    std::to_string(p.shape().param_count()));
  }
}

template void ValidateParams(const BasicMlpParams<float>&);
template void ValidateParams(const BasicMlpParams<double>&);

namespace {

template <typename T>
void Transpose(std::span<const T> w, size_t rows, size_t cols, std::vector<T>& out) {
  out.resize(rows * cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) out[c * rows + r] = w[r * cols + c];
  }
}

void CheckBatch(size_t input_dim, size_t n, size_t features, size_t base) {
  if (features != n * input_dim || base != n * kOutputDim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "batch buffers do not match feature dimension " +
                    std::to_string(input_dim));
  }
}

}  // namespace

template <typename T>
BasicMlpEngine<T>::BasicMlpEngine() {
  if constexpr (std::is_same_v<T, float>) kernels_ = &kernels::Active();
}

template <typename T>
BasicMlpEngine<T>::BasicMlpEngine(const kernels::DenseKernels& k) : kernels_(&k) {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
}

template <typename T>
void BasicMlpEngine<T>::RunForward(const BasicMlpParams<T>& params, size_t n,
                                   std::span<const T> features) {
  const auto layers = params.shape().layers();
  h1_.resize(n * params.hidden);
  h2_.resize(n * params.hidden);
  out_.resize(n * kOutputDim);
  T* acts[kLayerCount] = {h1_.data(), h2_.data(), out_.data()};
  const T* in = features.data();
  for (size_t l = 0; l < kLayerCount; ++l) {
    const bool relu = l + 1 < kLayerCount;
    const auto w = params.weights(l);
    const auto b = params.bias(l);
    if constexpr (std::is_same_v<T, float>) {
      Transpose<T>(w, layers[l].out, layers[l].in, wt_[l]);
      kernels_->forward(in, n, layers[l].in, w.data(), wt_[l].data(), b.data(),
                        layers[l].out, relu, acts[l]);
    } else {
      kernels::ForwardRef<T>(in, n, layers[l].in, w.data(), b.data(),
                             layers[l].out, relu, acts[l]);
    }
    in = acts[l];
  }
}

template <typename T>
void BasicMlpEngine<T>::Predict(const BasicMlpParams<T>& params, size_t n,
                                std::span<const T> features,
                                std::span<const T> base, std::span<T> out) {
  ValidateParams(params);
  CheckBatch(params.encoder.feature_dim(), n, features.size(), base.size());
  if (out.size() != n * kOutputDim) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction buffer size mismatch");
  }
  RunForward(params, n, features);
  for (size_t i = 0; i < n * kOutputDim; ++i) out[i] = out_[i] + base[i];
}

template <typename T>
double BasicMlpEngine<T>::Loss(const BasicMlpParams<T>& params,
                               const BasicBatch<T>& batch) {
  ValidateParams(params);
  CheckBatch(params.encoder.feature_dim(), batch.size, batch.features.size(),
             batch.base.size());
  RunForward(params, batch.size, batch.features);
  double loss = 0.0;
  for (size_t i = 0; i < batch.size * kOutputDim; ++i) {
    const T r = (out_[i] + batch.base[i]) - batch.targets[i];
    loss += static_cast<double>(r) * static_cast<double>(r);
  }
  return loss;
}

template <typename T>
double BasicMlpEngine<T>::LossAndGrads(const BasicMlpParams<T>& params,
                                       const BasicBatch<T>& batch,
                                       std::span<T> grads) {
  ValidateParams(params);
  const size_t n = batch.size;
  CheckBatch(params.encoder.feature_dim(), n, batch.features.size(),
             batch.base.size());
  if (batch.targets.size() != n * kOutputDim || grads.size() != params.values.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "target or gradient size mismatch");
  }
  RunForward(params, n, batch.features);

  // d(loss)/d(out) = 2 (out + base - target); the residual add passes the
  // gradient through unchanged.
  d3_.resize(n * kOutputDim);
  double loss = 0.0;
  for (size_t i = 0; i < n * kOutputDim; ++i) {
    const T r = (out_[i] + batch.base[i]) - batch.targets[i];
    loss += static_cast<double>(r) * static_cast<double>(r);
    d3_[i] = T(2) * r;
  }

  std::fill(grads.begin(), grads.end(), T(0));
  const auto layers = params.shape().layers();
  const size_t hidden = params.hidden;
  d2_.resize(n * hidden);
  d1_.resize(n * hidden);
  T* g = grads.data();
  const T* w3 = params.weights(2).data();
  const T* w2 = params.weights(1).data();

  if constexpr (std::is_same_v<T, float>) {
    kernels_->grad_weights(h2_.data(), d3_.data(), n, hidden, kOutputDim,
                           g + layers[2].weight_offset, g + layers[2].bias_offset);
    kernels_->backprop_relu(d3_.data(), w3, n, kOutputDim, hidden, h2_.data(),
                            d2_.data());
    kernels_->grad_weights(h1_.data(), d2_.data(), n, hidden, hidden,
                           g + layers[1].weight_offset, g + layers[1].bias_offset);
    kernels_->backprop_relu(d2_.data(), w2, n, hidden, hidden, h1_.data(),
                            d1_.data());
    kernels_->grad_weights(batch.features.data(), d1_.data(), n, layers[0].in,
                           hidden, g + layers[0].weight_offset,
                           g + layers[0].bias_offset);
  } else {
    kernels::GradWeightsRef<T>(h2_.data(), d3_.data(), n, hidden, kOutputDim,
                               g + layers[2].weight_offset,
                               g + layers[2].bias_offset);
    kernels::BackpropReluRef<T>(d3_.data(), w3, n, kOutputDim, hidden,
                                h2_.data(), d2_.data());
    kernels::GradWeightsRef<T>(h1_.data(), d2_.data(), n, hidden, hidden,
                               g + layers[1].weight_offset,
                               g + layers[1].bias_offset);
    kernels::BackpropReluRef<T>(d2_.data(), w2, n, hidden, hidden, h1_.data(),
                                d1_.data());
    kernels::GradWeightsRef<T>(batch.features.data(), d1_.data(), n,
                               layers[0].in, hidden, g + layers[0].weight_offset,
                               g + layers[0].bias_offset);
  }
  return loss;
}

template class BasicMlpEngine<float>;
template class BasicMlpEngine<double>;

}  // namespace widegamut
