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

#ifndef WIDEGAMUT_OPTIMIZER_H_
#define WIDEGAMUT_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace widegamut {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. State lives here; parameters are updated in
// place.
class Adam {
 public:
  Adam(size_t param_count, const AdamOptions& options);

  void Step(std::span<float> params, std::span<const float> grads);
  uint64_t steps() const { return t_; }

 private:
  AdamOptions options_;
  std::vector<float> m_;
  std::vector<float> v_;
  uint64_t t_ = 0;
};

// Plain gradient descent: p -= lr * g.
void SgdStep(std::span<float> params, std::span<const float> grads,
             double learning_rate);

}  // namespace widegamut

#endif  // WIDEGAMUT_OPTIMIZER_H_
