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

#include "widegamut/kernels.h"

namespace widegamut::kernels {
namespace {

void Forward(const float* in, size_t batch, size_t in_dim, const float* w,
             const float* /*wt*/, const float* bias, size_t out_dim, bool relu,
             float* out) {
  ForwardRef<float>(in, batch, in_dim, w, bias, out_dim, relu, out);
}

void GradWeights(const float* in, const float* delta, size_t batch,
                 size_t in_dim, size_t out_dim, float* gw, float* gb) {
  GradWeightsRef<float>(in, delta, batch, in_dim, out_dim, gw, gb);
}

void BackpropRelu(const float* delta, const float* w, size_t batch,
                  size_t out_dim, size_t in_dim, const float* act, float* din) {
  BackpropReluRef<float>(delta, w, batch, out_dim, in_dim, act, din);
}

}  // namespace

const DenseKernels& Scalar() {
  static const DenseKernels k{"scalar", &Forward, &GradWeights, &BackpropRelu};
  return k;
}

}  // namespace widegamut::kernels
