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

// Weight payload serialization and PNG embedding.
//
// Payload layout, little-endian throughout:
//
//   offset  size  field
//        0     4  magic "GMLP"
//        4     1  version (1)
//        5     1  encoding: input mode in bits 7..6, K in bits 5..0
//                 (K = 0 means the sinusoidal encoding is off)
//        6     2  hidden width, unsigned
//        8     4  image width, unsigned
//       12     4  image height, unsigned
//       16  4*P  parameters as IEEE-754 binary32, order W1 b1 W2 b2 W3 b3,
//                weights row-major (out x in)
//
// In a PNG the payload is base64 text in an uncompressed iTXt chunk with
// keyword "GamutMLP", placed immediately before IEND.

#ifndef WIDEGAMUT_CODEC_H_
#define WIDEGAMUT_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "widegamut/mlp.h"

namespace widegamut {

using Bytes = std::vector<uint8_t>;

inline constexpr char kPayloadMagic[4] = {'G', 'M', 'L', 'P'};
inline constexpr uint8_t kPayloadVersion = 1;
inline constexpr size_t kPayloadHeaderSize = 16;
inline constexpr std::string_view kPngKeyword = "GamutMLP";
inline constexpr std::string_view kSidecarExtension = ".gmlp";

struct ImageDims {
  uint32_t width = 0;
  uint32_t height = 0;
  friend bool operator==(const ImageDims&, const ImageDims&) = default;
};

struct PayloadHeader {
  uint8_t version = 0;
  EncoderConfig encoder;
  uint16_t hidden = 0;
  ImageDims dims;
};

// 16 + 4 * param_count.
size_t PayloadSize(const MlpShape& shape);

Bytes Serialize(const MlpParams& params, ImageDims dims);

struct DecodedPayload {
  MlpParams params;
  ImageDims dims;
};

// Distinct Error codes: kBadMagic, kVersionMismatch, kTruncated (stream ends
// early or has trailing bytes), kInvalidArgument (undecodable header field).
DecodedPayload Deserialize(std::span<const uint8_t> bytes);

// Parses and validates just the fixed header.
PayloadHeader ReadPayloadHeader(std::span<const uint8_t> bytes);

std::string Base64Encode(std::span<const uint8_t> bytes);
// Strict RFC 4648 decoding with padding; throws Error(kMalformedBase64).
Bytes Base64Decode(std::string_view text);

// Returns `png` with the payload in a GamutMLP iTXt chunk before IEND. Any
// existing GamutMLP chunk is removed first, so embedding is idempotent.
Bytes EmbedPayload(std::span<const uint8_t> png, std::span<const uint8_t> payload);

// Finds the GamutMLP chunk, decodes it and checks the magic. Throws
// Error(kMissingMetadata) when absent, kMalformedBase64 on bad text,
// kBadMagic when the decoded bytes are not a payload.
Bytes ExtractPayload(std::span<const uint8_t> png);

bool HasPayload(std::span<const uint8_t> png);

// Sidecar path for an image: the same path with the .gmlp extension.
std::string SidecarPath(std::string_view image_path);

}  // namespace widegamut

#endif  // WIDEGAMUT_CODEC_H_
