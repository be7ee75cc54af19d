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

// Dense-layer kernels for batched MLP training and inference.
//
// Matrices are row-major. A layer with `in` inputs and `out` outputs stores
// its weights w as out x in; `wt` is the same matrix transposed (in x out),
// kept alongside because the forward pass wants output-contiguous rows.
//
// Every kernel processes each sample with the same operation sequence no
// matter how the batch is split, so a sample's result never depends on its
// neighbours. Batch reductions (weight gradients) run in ascending sample
// order.

#ifndef WIDEGAMUT_KERNELS_H_
#define WIDEGAMUT_KERNELS_H_

#include <cstddef>
#include <string_view>

namespace widegamut::kernels {

struct DenseKernels {
  std::string_view name;

  // out[b][j] = act(bias[j] + sum_i in[b][i] * w[j][i]); act = ReLU or id.
  void (*forward)(const float* in, size_t batch, size_t in_dim, const float* w,
                  const float* wt, const float* bias, size_t out_dim, bool relu,
                  float* out);

  // gw[j][i] += sum_b delta[b][j] * in[b][i];  gb[j] += sum_b delta[b][j].
  void (*grad_weights)(const float* in, const float* delta, size_t batch,
                       size_t in_dim, size_t out_dim, float* gw, float* gb);

  // din[b][i] = (act[b][i] > 0) ? sum_j delta[b][j] * w[j][i] : 0.
  void (*backprop_relu)(const float* delta, const float* w, size_t batch,
                        size_t out_dim, size_t in_dim, const float* act,
                        float* din);
};

// Portable reference kernels.
const DenseKernels& Scalar();

// AVX2+FMA kernels, or nullptr when not compiled in or unsupported by the
// running CPU.
const DenseKernels* Avx2();

// The kernels used by training and inference: AVX2 when available, scalar
// otherwise. Setting WIDEGAMUT_KERNELS=scalar in the environment forces the
// reference path.
const DenseKernels& Active();

// Generic reference implementations, shared by the float scalar table and
// the 64-bit gradient-check path.
template <typename T>
void ForwardRef(const T* in, size_t batch, size_t in_dim, const T* w,
                const T* bias, size_t out_dim, bool relu, T* out) {
  for (size_t b = 0; b < batch; ++b) {
    const T* x = in + b * in_dim;
    T* y = out + b * out_dim;
    for (size_t j = 0; j < out_dim; ++j) {
      const T* row = w + j * in_dim;
      T s = bias[j];
      for (size_t i = 0; i < in_dim; ++i) s += row[i] * x[i];
      y[j] = (relu && s < T(0)) ? T(0) : s;
    }
  }
}

template <typename T>
void GradWeightsRef(const T* in, const T* delta, size_t batch, size_t in_dim,
                    size_t out_dim, T* gw, T* gb) {
  for (size_t b = 0; b < batch; ++b) {
    const T* x = in + b * in_dim;
    const T* d = delta + b * out_dim;
    for (size_t j = 0; j < out_dim; ++j) {
      T* g = gw + j * in_dim;
      for (size_t i = 0; i < in_dim; ++i) g[i] += d[j] * x[i];
      gb[j] += d[j];
    }
  }
}

template <typename T>
void BackpropReluRef(const T* delta, const T* w, size_t batch, size_t out_dim,
                     size_t in_dim, const T* act, T* din) {
  for (size_t b = 0; b < batch; ++b) {
    const T* d = delta + b * out_dim;
    const T* a = act + b * in_dim;
    T* g = din + b * in_dim;
    for (size_t i = 0; i < in_dim; ++i) {
      T s = T(0);
      for (size_t j = 0; j < out_dim; ++j) s += d[j] * w[j * in_dim + i];
      g[i] = a[i] > T(0) ? s : T(0);
    }
  }
}

}  // namespace widegamut::kernels

#endif  // WIDEGAMUT_KERNELS_H_
