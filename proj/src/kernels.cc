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

#include <cstdlib>
#include <string_view>

#include "widegamut/kernels.h"

namespace widegamut::kernels {

#if WIDEGAMUT_HAVE_AVX2
const DenseKernels& Avx2Table();  // kernels_avx2.cc

const DenseKernels* Avx2() {
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &Avx2Table() : nullptr;
}
#else
const DenseKernels* Avx2() { return nullptr; }
#endif

const DenseKernels& Active() {
  static const DenseKernels& active = []() -> const DenseKernels& {
    const char* env = std::getenv("WIDEGAMUT_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return Scalar();
    if (const DenseKernels* k = Avx2()) return *k;
    return Scalar();
  }();
  return active;
}

}  // namespace widegamut::kernels
