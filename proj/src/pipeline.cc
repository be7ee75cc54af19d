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

#include "widegamut/pipeline.h"

#include <string>

#include "widegamut/error.h"
#include "widegamut/png_io.h"

namespace widegamut {

ReductionResult ReduceAndEmbed(const LinearRgbImage& prophoto,
                               const TrainConfig& config,
                               const MlpParams* meta_init, bool zero_init) {
  config.Validate();
  if (prophoto.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  GamutReduction red = ReduceGamut(prophoto, /*quantize=*/true);

  ReductionResult out;
  out.no_out_of_gamut = red.mask.CountOutOfGamut() == 0;
  // With nothing out of gamut the residual target is quantization noise only.
  // Starting from a zero residual (the naive expansion, already within the
  // 8-bit bound) keeps the fit small; a random init does not come back.
  const MlpParams init = out.no_out_of_gamut    ? ZeroParams(config.hidden, config.encoder)
                         : meta_init != nullptr ? *meta_init
                         : zero_init            ? ZeroParams(config.hidden, config.encoder)
                                                : InitialParams(config);
  OptimizeResult fit = OptimizeFrom(prophoto, red.clipped_prophoto, red.mask, init, config);

  const ImageDims dims{static_cast<uint32_t>(prophoto.width()),
                       static_cast<uint32_t>(prophoto.height())};
  out.payload = Serialize(fit.params, dims);
  out.png = EmbedPayload(EncodeSrgbPng(red.srgb), out.payload);
  out.validation = PredictImage(red.clipped_prophoto, fit.params);
  out.params = std::move(fit.params);
  out.stats = std::move(fit.stats);
  out.srgb = std::move(red.srgb);
  out.mask = std::move(red.mask);
  out.clipped = std::move(red.clipped_prophoto);
  return out;
}

ExpansionResult ExpandWithPayload(std::span<const uint8_t> png,
                                  std::span<const uint8_t> payload) {
  DecodedPayload decoded = Deserialize(payload);
  const SrgbImage srgb = SrgbFromPng(DecodePng(png));
  if (decoded.dims.width != srgb.width() || decoded.dims.height != srgb.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "payload was made for a " + std::to_string(decoded.dims.width) + "x" +
                    std::to_string(decoded.dims.height) + " image");
  }
  ExpansionResult out;
  out.clipped = ExpandGamutNaive(srgb);
  out.recovered = PredictImage(out.clipped, decoded.params);
  out.params = std::move(decoded.params);
  out.dims = decoded.dims;
  return out;
}

ExpansionResult ExpandAndRecover(std::span<const uint8_t> png) {
  const Bytes payload = ExtractPayload(png);
  return ExpandWithPayload(png, payload);
}

}  // namespace widegamut
