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

#include "widegamut/codec.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>

#include "widegamut/error.h"
#include "widegamut/png_io.h"

namespace widegamut {
namespace {

void PutU16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(Bytes& out, uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<uint8_t>(v >> s));
}

uint16_t GetU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t GetU32(const uint8_t* p) {
  return uint32_t{p[0]} | (uint32_t{p[1]} << 8) | (uint32_t{p[2]} << 16) |
         (uint32_t{p[3]} << 24);
}

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int Base64Value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

// iTXt data: keyword\0 flag method language\0 translated\0 text.
std::string_view ITxtKeyword(const PngChunk& c) {
  const auto nul = std::find(c.data.begin(), c.data.end(), uint8_t{0});
  return std::string_view(reinterpret_cast<const char*>(c.data.data()),
                          static_cast<size_t>(nul - c.data.begin()));
}

bool IsPayloadChunk(const PngChunk& c) {
  return c.type_name() == "iTXt" && ITxtKeyword(c) == kPngKeyword;
}

}  // namespace

size_t PayloadSize(const MlpShape& shape) {
  return kPayloadHeaderSize + 4 * shape.param_count();
}

Bytes Serialize(const MlpParams& params, ImageDims dims) {
  if (params.hidden > 0xffff) {
    throw Error(ErrorCode::kInvalidArgument, "hidden size does not fit in 16 bits");
  }
  ValidateParams(params);
  if (params.encoder.k < 0 || params.encoder.k > 63) {
    throw Error(ErrorCode::kInvalidArgument, "K does not fit in 6 bits");
  }
  Bytes out;
  out.reserve(PayloadSize(params.shape()));
  out.insert(out.end(), std::begin(kPayloadMagic), std::end(kPayloadMagic));
  out.push_back(kPayloadVersion);
  out.push_back(static_cast<uint8_t>((static_cast<uint8_t>(params.encoder.mode) << 6) |
                                     static_cast<uint8_t>(params.encoder.k)));
  PutU16(out, static_cast<uint16_t>(params.hidden));
  PutU32(out, dims.width);
  PutU32(out, dims.height);
  for (float v : params.values) PutU32(out, std::bit_cast<uint32_t>(v));
  return out;
}

PayloadHeader ReadPayloadHeader(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kPayloadMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "payload does not start with GMLP");
  }
  if (bytes.size() < kPayloadHeaderSize) {
    throw Error(ErrorCode::kTruncated, "payload header truncated");
  }
  PayloadHeader h;
  h.version = bytes[4];
  if (h.version != kPayloadVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported payload version " + std::to_string(h.version));
  }
  const uint8_t enc = bytes[5];
  if ((enc >> 6) > static_cast<uint8_t>(InputMode::kXYRGB)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown input mode in payload");
  }
  h.encoder.mode = static_cast<InputMode>(enc >> 6);
  h.encoder.k = enc & 0x3f;
  h.hidden = GetU16(bytes.data() + 6);
  if (h.hidden == 0) throw Error(ErrorCode::kInvalidArgument, "payload hidden size is zero");
  h.dims.width = GetU32(bytes.data() + 8);
  h.dims.height = GetU32(bytes.data() + 12);
  return h;
}

DecodedPayload Deserialize(std::span<const uint8_t> bytes) {
  const PayloadHeader h = ReadPayloadHeader(bytes);
  DecodedPayload out;
  out.dims = h.dims;
  out.params.encoder = h.encoder;
  out.params.hidden = h.hidden;
  const size_t count = out.params.shape().param_count();
  const size_t expected = kPayloadHeaderSize + 4 * count;
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncated,
                "payload truncated: " + std::to_string(bytes.size()) + " of " +
                    std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kTruncated, "payload has trailing bytes");
  }
  out.params.values.resize(count);
  for (size_t i = 0; i < count; ++i) {
    out.params.values[i] =
        std::bit_cast<float>(GetU32(bytes.data() + kPayloadHeaderSize + 4 * i));
  }
  return out;
}

std::string Base64Encode(std::span<const uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const uint32_t v = (uint32_t{bytes[i]} << 16) | (uint32_t{bytes[i + 1]} << 8) |
                       bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const size_t rest = bytes.size() - i;
  if (rest > 0) {
    uint32_t v = uint32_t{bytes[i]} << 16;
    if (rest == 2) v |= uint32_t{bytes[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

Bytes Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::kMalformedBase64, "base64 length is not a multiple of 4");
  }
  Bytes out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    if (last && text[i + 3] == '=') pad = text[i + 2] == '=' ? 2 : 1;
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      int d = 0;
      if (k < 4 - pad) {
        d = Base64Value(text[i + k]);
        if (d < 0) throw Error(ErrorCode::kMalformedBase64, "invalid base64 character");
      }
      v = (v << 6) | static_cast<uint32_t>(d);
    }
    // Non-canonical encodings (stray bits under the padding) are rejected.
    if ((pad == 1 && (v & 0xff) != 0) || (pad == 2 && (v & 0xffff) != 0)) {
      throw Error(ErrorCode::kMalformedBase64, "non-canonical base64 padding");
    }
    out.push_back(static_cast<uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<uint8_t>(v));
  }
  return out;
}

Bytes EmbedPayload(std::span<const uint8_t> png, std::span<const uint8_t> payload) {
  std::vector<PngChunk> chunks = ParseChunks(png);
  std::erase_if(chunks, IsPayloadChunk);
  PngChunk c;
  std::memcpy(c.type.data(), "iTXt", 4);
  c.data.assign(kPngKeyword.begin(), kPngKeyword.end());
  c.data.push_back(0);  // keyword terminator
  c.data.push_back(0);  // compression flag: uncompressed
  c.data.push_back(0);  // compression method
  c.data.push_back(0);  // empty language tag
  c.data.push_back(0);  // empty translated keyword
  const std::string text = Base64Encode(payload);
  c.data.insert(c.data.end(), text.begin(), text.end());
  chunks.insert(chunks.end() - 1, std::move(c));
  return AssembleChunks(chunks);
}

bool HasPayload(std::span<const uint8_t> png) {
  const auto chunks = ParseChunks(png);
  return std::any_of(chunks.begin(), chunks.end(), IsPayloadChunk);
}

Bytes ExtractPayload(std::span<const uint8_t> png) {
  for (const PngChunk& c : ParseChunks(png)) {
    if (!IsPayloadChunk(c)) continue;
    // Skip keyword\0, flag, method, then language\0 and translated\0.
    size_t pos = kPngKeyword.size() + 1;
    if (pos + 2 > c.data.size()) {
      throw Error(ErrorCode::kMalformedBase64, "GamutMLP chunk is truncated");
    }
    if (c.data[pos] != 0) {
      throw Error(ErrorCode::kMalformedBase64, "compressed GamutMLP chunk not supported");
    }
    pos += 2;
    for (int field = 0; field < 2; ++field) {
      const auto nul = std::find(c.data.begin() + pos, c.data.end(), uint8_t{0});
      if (nul == c.data.end()) {
        throw Error(ErrorCode::kMalformedBase64, "GamutMLP chunk header malformed");
      }
      pos = static_cast<size_t>(nul - c.data.begin()) + 1;
    }
    const std::string_view text(reinterpret_cast<const char*>(c.data.data()) + pos,
                                c.data.size() - pos);
    Bytes payload = Base64Decode(text);
    if (payload.size() < 4 || std::memcmp(payload.data(), kPayloadMagic, 4) != 0) {
      throw Error(ErrorCode::kBadMagic, "embedded payload does not start with GMLP");
    }
    return payload;
  }
  throw Error(ErrorCode::kMissingMetadata, "PNG has no GamutMLP metadata chunk");
}

std::string SidecarPath(std::string_view image_path) {
  std::filesystem::path p{std::string(image_path)};
  p.replace_extension(std::string(kSidecarExtension));
  return p.string();
}

}  // namespace widegamut
