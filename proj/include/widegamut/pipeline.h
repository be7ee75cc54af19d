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

// The two codec phases: ProPhoto -> sRGB PNG with an embedded recovery
// model, and sRGB PNG -> recovered ProPhoto.

#ifndef WIDEGAMUT_PIPELINE_H_
#define WIDEGAMUT_PIPELINE_H_

#include <optional>
#include <span>

#include "widegamut/codec.h"
#include "widegamut/colorspace.h"
#include "widegamut/train.h"

namespace widegamut {

struct ReductionResult {
  // 8-bit sRGB PNG with the GamutMLP chunk.
  Bytes png;
  Bytes payload;
  SrgbImage srgb;
  GamutMask mask;
  // The decoder-side starting point, M^-1 g^-1(srgb).
  LinearRgbImage clipped;
  MlpParams params;
  OptimizeStats stats;
  // The whole-image recovery the embedded model produces, computed at
  // reduction time.
  LinearRgbImage validation;
  bool no_out_of_gamut = false;
};

// Quantized gamut reduction, then a fit against the clipped image derived
// from the 8-bit output (so quantization error is learned as well). With
// `meta_init` the fast path is used: config.iterations steps from that
// init; otherwise a random init. When `zero_init` is set and no meta init
// is given, the fit starts from all-zero parameters. An image with no
// out-of-gamut pixels always starts from zero parameters and only learns
// the quantization error.
ReductionResult ReduceAndEmbed(const LinearRgbImage& prophoto,
                               const TrainConfig& config,
                               const MlpParams* meta_init = nullptr,
                               bool zero_init = false);

struct ExpansionResult {
  LinearRgbImage recovered;
  LinearRgbImage clipped;
  MlpParams params;
  ImageDims dims;
};

// Extracts the payload and recovers the ProPhoto image. A missing or
// corrupt payload is an error (kMissingMetadata, kBadMagic, ...); callers
// wanting the plain conversion use ExpandGamutNaive explicitly.
ExpansionResult ExpandAndRecover(std::span<const uint8_t> png);

// Same, with the payload supplied separately (sidecar file).
ExpansionResult ExpandWithPayload(std::span<const uint8_t> png,
                                  std::span<const uint8_t> payload);

}  // namespace widegamut

#endif  // WIDEGAMUT_PIPELINE_H_
