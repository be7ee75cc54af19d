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

// AVX2+FMA dense kernels. This file is compiled with -mavx2 -mfma and must
// only be entered after the runtime CPU check in kernels.cc.

#include "widegamut/kernels.h"

#if WIDEGAMUT_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace widegamut::kernels {
namespace {

constexpr size_t kLanes = 8;
// Samples per weight-gradient tile; sized so a tile of 120-wide features
// stays in L2.
constexpr size_t kGradTile = 256;

inline float HorizontalSum(__m256 v) {
  const __m128 lo = _mm256_castps256_ps128(v);
  const __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_movehdup_ps(s));
  return _mm_cvtss_f32(s);
}

// ---------------------------------------------------------------------------
// Forward, wide output: y[j..j+8NV) accumulated with broadcast x[i] * wt[i].

template <int NV, int NS>
inline void ForwardColumns(const float* const* x, size_t in_dim, const float* wt,
                           size_t out_dim, const float* bias, size_t j,
                           bool relu, float* const* y) {
  __m256 acc[NS][NV];
  for (int v = 0; v < NV; ++v) {
    const __m256 b = _mm256_loadu_ps(bias + j + v * kLanes);
    for (int s = 0; s < NS; ++s) acc[s][v] = b;
  }
  for (size_t i = 0; i < in_dim; ++i) {
    const float* row = wt + i * out_dim + j;
    __m256 wv[NV];
    for (int v = 0; v < NV; ++v) wv[v] = _mm256_loadu_ps(row + v * kLanes);
    for (int s = 0; s < NS; ++s) {
      const __m256 xs = _mm256_broadcast_ss(x[s] + i);
      for (int v = 0; v < NV; ++v) acc[s][v] = _mm256_fmadd_ps(xs, wv[v], acc[s][v]);
    }
  }
  const __m256 zero = _mm256_setzero_ps();
  for (int s = 0; s < NS; ++s) {
    for (int v = 0; v < NV; ++v) {
      __m256 r = acc[s][v];
      if (relu) r = _mm256_max_ps(r, zero);
      _mm256_storeu_ps(y[s] + j + v * kLanes, r);
    }
  }
}

template <int NS>
inline void ForwardWideSamples(const float* const* x, size_t in_dim,
                               const float* wt, const float* bias,
                               size_t out_dim, bool relu, float* const* y) {
  size_t j = 0;
  for (; j + 4 * kLanes <= out_dim; j += 4 * kLanes) {
    ForwardColumns<4, NS>(x, in_dim, wt, out_dim, bias, j, relu, y);
  }
  for (; j + kLanes <= out_dim; j += kLanes) {
    ForwardColumns<1, NS>(x, in_dim, wt, out_dim, bias, j, relu, y);
  }
  for (; j < out_dim; ++j) {
    for (int s = 0; s < NS; ++s) {
      float acc = bias[j];
      for (size_t i = 0; i < in_dim; ++i) {
        acc = std::fma(x[s][i], wt[i * out_dim + j], acc);
      }
      y[s][j] = (relu && acc < 0.0f) ? 0.0f : acc;
    }
  }
}

// Forward, narrow output (fewer than 8 outputs): one dot product per output.
inline float Dot(const float* a, const float* b, size_t n) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
  }
  float s = HorizontalSum(acc);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

void Forward(const float* in, size_t batch, size_t in_dim, const float* w,
             const float* wt, const float* bias, size_t out_dim, bool relu,
             float* out) {
  if (out_dim < kLanes) {
    for (size_t b = 0; b < batch; ++b) {
      const float* x = in + b * in_dim;
      float* y = out + b * out_dim;
      for (size_t j = 0; j < out_dim; ++j) {
        const float s = bias[j] + Dot(w + j * in_dim, x, in_dim);
        y[j] = (relu && s < 0.0f) ? 0.0f : s;
      }
    }
    return;
  }
  size_t b = 0;
  for (; b + 2 <= batch; b += 2) {
    const float* x[2] = {in + b * in_dim, in + (b + 1) * in_dim};
    float* y[2] = {out + b * out_dim, out + (b + 1) * out_dim};
    ForwardWideSamples<2>(x, in_dim, wt, bias, out_dim, relu, y);
  }
  if (b < batch) {
    const float* x[1] = {in + b * in_dim};
    float* y[1] = {out + b * out_dim};
    ForwardWideSamples<1>(x, in_dim, wt, bias, out_dim, relu, y);
  }
}

// ---------------------------------------------------------------------------
// Weight gradients: register block of JB output rows x IV input vectors,
// accumulated over one batch tile, then added to gw.

template <int JB, int IV>
inline void GradBlock(const float* in, const float* delta, size_t b0, size_t b1,
                      size_t in_dim, size_t out_dim, size_t j, size_t i,
                      float* gw) {
  __m256 acc[JB][IV];
  for (int r = 0; r < JB; ++r) {
    for (int v = 0; v < IV; ++v) acc[r][v] = _mm256_setzero_ps();
  }
  for (size_t b = b0; b < b1; ++b) {
    const float* x = in + b * in_dim + i;
    const float* d = delta + b * out_dim + j;
    __m256 xv[IV];
    for (int v = 0; v < IV; ++v) xv[v] = _mm256_loadu_ps(x + v * kLanes);
    for (int r = 0; r < JB; ++r) {
      const __m256 dr = _mm256_broadcast_ss(d + r);
      for (int v = 0; v < IV; ++v) acc[r][v] = _mm256_fmadd_ps(dr, xv[v], acc[r][v]);
    }
  }
  for (int r = 0; r < JB; ++r) {
    float* g = gw + (j + r) * in_dim + i;
    for (int v = 0; v < IV; ++v) {
      _mm256_storeu_ps(g + v * kLanes,
                       _mm256_add_ps(_mm256_loadu_ps(g + v * kLanes), acc[r][v]));
    }
  }
}

template <int JB>
inline void GradRows(const float* in, const float* delta, size_t b0, size_t b1,
                     size_t in_dim, size_t out_dim, size_t j, float* gw) {
  size_t i = 0;
  for (; i + 3 * kLanes <= in_dim; i += 3 * kLanes) {
    GradBlock<JB, 3>(in, delta, b0, b1, in_dim, out_dim, j, i, gw);
  }
  for (; i + kLanes <= in_dim; i += kLanes) {
    GradBlock<JB, 1>(in, delta, b0, b1, in_dim, out_dim, j, i, gw);
  }
  for (; i < in_dim; ++i) {
    for (int r = 0; r < JB; ++r) {
      float s = 0.0f;
      for (size_t b = b0; b < b1; ++b) {
        s = std::fma(delta[b * out_dim + j + r], in[b * in_dim + i], s);
      }
      gw[(j + r) * in_dim + i] += s;
    }
  }
}

void GradWeights(const float* in, const float* delta, size_t batch,
                 size_t in_dim, size_t out_dim, float* gw, float* gb) {
  for (size_t b0 = 0; b0 < batch; b0 += kGradTile) {
    const size_t b1 = std::min(batch, b0 + kGradTile);
    size_t j = 0;
    for (; j + 4 <= out_dim; j += 4) {
      GradRows<4>(in, delta, b0, b1, in_dim, out_dim, j, gw);
    }
    for (; j < out_dim; ++j) GradRows<1>(in, delta, b0, b1, in_dim, out_dim, j, gw);
  }
  // Bias gradient: column sums of delta, vectorized across outputs.
  size_t j = 0;
  for (; j + kLanes <= out_dim; j += kLanes) {
    __m256 acc = _mm256_setzero_ps();
    for (size_t b = 0; b < batch; ++b) {
      acc = _mm256_add_ps(acc, _mm256_loadu_ps(delta + b * out_dim + j));
    }
    _mm256_storeu_ps(gb + j, _mm256_add_ps(_mm256_loadu_ps(gb + j), acc));
  }
  for (; j < out_dim; ++j) {
    float s = 0.0f;
    for (size_t b = 0; b < batch; ++b) s += delta[b * out_dim + j];
    gb[j] += s;
  }
}

// ---------------------------------------------------------------------------
// Backprop through w and the ReLU of the layer below.

template <int NV, int NS>
inline void BackpropColumns(const float* const* d, const float* w,
                            size_t out_dim, size_t in_dim, size_t i,
                            const float* const* act, float* const* din) {
  __m256 acc[NS][NV];
  for (int s = 0; s < NS; ++s) {
    for (int v = 0; v < NV; ++v) acc[s][v] = _mm256_setzero_ps();
  }
  for (size_t j = 0; j < out_dim; ++j) {
    const float* row = w + j * in_dim + i;
    __m256 wv[NV];
    for (int v = 0; v < NV; ++v) wv[v] = _mm256_loadu_ps(row + v * kLanes);
    for (int s = 0; s < NS; ++s) {
      const __m256 ds = _mm256_broadcast_ss(d[s] + j);
      for (int v = 0; v < NV; ++v) acc[s][v] = _mm256_fmadd_ps(ds, wv[v], acc[s][v]);
    }
  }
  const __m256 zero = _mm256_setzero_ps();
  for (int s = 0; s < NS; ++s) {
    for (int v = 0; v < NV; ++v) {
      const __m256 a = _mm256_loadu_ps(act[s] + i + v * kLanes);
      const __m256 live = _mm256_cmp_ps(a, zero, _CMP_GT_OQ);
      _mm256_storeu_ps(din[s] + i + v * kLanes, _mm256_and_ps(acc[s][v], live));
    }
  }
}

template <int NS>
inline void BackpropSamples(const float* const* d, const float* w,
                            size_t out_dim, size_t in_dim,
                            const float* const* act, float* const* din) {
  size_t i = 0;
  for (; i + 4 * kLanes <= in_dim; i += 4 * kLanes) {
    BackpropColumns<4, NS>(d, w, out_dim, in_dim, i, act, din);
  }
  for (; i + kLanes <= in_dim; i += kLanes) {
    BackpropColumns<1, NS>(d, w, out_dim, in_dim, i, act, din);
  }
  for (; i < in_dim; ++i) {
    for (int s = 0; s < NS; ++s) {
      float acc = 0.0f;
      for (size_t j = 0; j < out_dim; ++j) {
        acc = std::fma(d[s][j], w[j * in_dim + i], acc);
      }
      din[s][i] = act[s][i] > 0.0f ? acc : 0.0f;
    }
  }
}

void BackpropRelu(const float* delta, const float* w, size_t batch,
                  size_t out_dim, size_t in_dim, const float* act, float* din) {
  size_t b = 0;
  for (; b + 2 <= batch; b += 2) {
    const float* d[2] = {delta + b * out_dim, delta + (b + 1) * out_dim};
    const float* a[2] = {act + b * in_dim, act + (b + 1) * in_dim};
    float* g[2] = {din + b * in_dim, din + (b + 1) * in_dim};
    BackpropSamples<2>(d, w, out_dim, in_dim, a, g);
  }
  if (b < batch) {
    const float* d[1] = {delta + b * out_dim};
    const float* a[1] = {act + b * in_dim};
    float* g[1] = {din + b * in_dim};
    BackpropSamples<1>(d, w, out_dim, in_dim, a, g);
  }
}

}  // namespace

const DenseKernels& Avx2Table() {
  static const DenseKernels k{"avx2", &Forward, &GradWeights, &BackpropRelu};
  return k;
}

}  // namespace widegamut::kernels

#endif  // WIDEGAMUT_HAVE_AVX2
