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

#include "widegamut/optimizer.h"

#include <cmath>

#include "widegamut/error.h"

namespace widegamut {

Adam::Adam(size_t param_count, const AdamOptions& options)
    : options_(options), m_(param_count, 0.0f), v_(param_count, 0.0f) {}

void Adam::Step(std::span<float> params, std::span<const float> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "Adam state size mismatch");
  }
  ++t_;
  const float b1 = static_cast<float>(options_.beta1);
  const float b2 = static_cast<float>(options_.beta2);
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  // lr * sqrt(c2) / c1 folds both bias corrections into the step size; eps
  // is scaled to match so the update equals lr * mhat / (sqrt(vhat) + eps).
  const float step = static_cast<float>(options_.learning_rate * std::sqrt(c2) / c1);
  const float eps = static_cast<float>(options_.eps * std::sqrt(c2));
  for (size_t i = 0; i < params.size(); ++i) {
    const float g = grads[i];
    m_[i] = b1 * m_[i] + (1.0f - b1) * g;
    v_[i] = b2 * v_[i] + (1.0f - b2) * g * g;
    params[i] -= step * m_[i] / (std::sqrt(v_[i]) + eps);
  }
}

void SgdStep(std::span<float> params, std::span<const float> grads,
             double learning_rate) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "SGD size mismatch");
  }
  const float lr = static_cast<float>(learning_rate);
  for (size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

}  // namespace widegamut
