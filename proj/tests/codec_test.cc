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

#include <bit>
#include <cstring>
#include <string>

#include <gtest/gtest.h>

#include "test_util.h"
#include "widegamut/colorspace.h"
#include "widegamut/error.h"
#include "widegamut/png_io.h"

namespace widegamut {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

Bytes SmallPng() {
  return EncodeSrgbPng(ReduceGamut(testing::RandomImage(6, 4, 1), true).srgb);
}

TEST(PayloadTest, DefaultModelIsExactly20124Bytes) {
  const MlpParams p = ZeroParams(32, EncoderConfig{});
  EXPECT_EQ(Serialize(p, {256, 256}).size(), 20124u);
  EXPECT_EQ(PayloadSize(p.shape()), 20124u);
  EXPECT_LT(20124u, 23u * 1024);
}

TEST(PayloadTest, ModelSizesFallUnderBudgets) {
  const EncoderConfig enc;
  EXPECT_EQ(PayloadSize(MlpShape(120, 16)), 9052u);
  EXPECT_LT(PayloadSize(MlpShape(120, 16)), 11u * 1024);
  EXPECT_LT(PayloadSize(MlpShape(120, 32)), 23u * 1024);
  EXPECT_LT(PayloadSize(MlpShape(120, 64)), 53u * 1024);
  EXPECT_LT(PayloadSize(MlpShape(120, 128)), 137u * 1024);
}

TEST(PayloadTest, HeaderLayoutIsLittleEndian) {
  MlpParams p = ZeroParams(32, EncoderConfig{12, InputMode::kXYRGB});
  p.values[0] = 1.0f;
  const Bytes b = Serialize(p, {0x01020304, 0x0a0b0c0d});
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "GMLP");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], (2 << 6) | 12);
  EXPECT_EQ(b[6], 32);
  EXPECT_EQ(b[7], 0);
  EXPECT_EQ(b[8], 0x04);
  EXPECT_EQ(b[11], 0x01);
  EXPECT_EQ(b[12], 0x0d);
  EXPECT_EQ(b[15], 0x0a);
  // 1.0f = 0x3f800000
  EXPECT_EQ(b[16], 0x00);
  EXPECT_EQ(b[18], 0x80);
  EXPECT_EQ(b[19], 0x3f);
}

TEST(PayloadTest, RoundTripPreservesEveryBitPattern) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const EncoderConfig enc{static_cast<int>(rng.Below(13)),
                            static_cast<InputMode>(rng.Below(3))};
    MlpParams p = ZeroParams(1 + rng.Below(40), enc);
    for (float& v : p.values) v = std::bit_cast<float>(static_cast<uint32_t>(rng.Below(1ull << 32)));
    p.values[0] = -0.0f;
    const ImageDims dims{static_cast<uint32_t>(rng.Below(5000)),
                         static_cast<uint32_t>(rng.Below(5000))};
    const DecodedPayload d = Deserialize(Serialize(p, dims));
    EXPECT_EQ(d.dims.width, dims.width);
    EXPECT_EQ(d.dims.height, dims.height);
    EXPECT_EQ(d.params.encoder, p.encoder);
    EXPECT_EQ(d.params.hidden, p.hidden);
    ASSERT_EQ(d.params.values.size(), p.values.size());
    for (size_t i = 0; i < p.values.size(); ++i) {
      ASSERT_EQ(std::bit_cast<uint32_t>(d.params.values[i]),
                std::bit_cast<uint32_t>(p.values[i]));
    }
  }
}

TEST(PayloadTest, DistinctErrors) {
  const Bytes good = Serialize(ZeroParams(8, EncoderConfig{}), {1, 1});
  Bytes bad = good;
  bad[0] = 'X';
  EXPECT_EQ(CodeOf([&] { Deserialize(bad); }), ErrorCode::kBadMagic);
  bad = good;
  bad[4] = 2;
  EXPECT_EQ(CodeOf([&] { Deserialize(bad); }), ErrorCode::kVersionMismatch);
  bad = good;
  bad.resize(good.size() - 1);
  EXPECT_EQ(CodeOf([&] { Deserialize(bad); }), ErrorCode::kTruncated);
  bad.resize(10);
  EXPECT_EQ(CodeOf([&] { Deserialize(bad); }), ErrorCode::kTruncated);
  bad = good;
  bad.push_back(0);
  EXPECT_EQ(CodeOf([&] { Deserialize(bad); }), ErrorCode::kTruncated);
  bad = good;
  bad[5] = 0xc0 | 12;  // mode 3 does not exist
  EXPECT_EQ(CodeOf([&] { Deserialize(bad); }), ErrorCode::kInvalidArgument);
}

TEST(PayloadTest, HiddenTooLargeRejected) {
  MlpParams p = ZeroParams(1, EncoderConfig{0, InputMode::kXY});
  p.hidden = 70000;  // Rejected before the (huge) parameter vector is examined.
  EXPECT_EQ(CodeOf([&] { Serialize(p, {}); }), ErrorCode::kInvalidArgument);
}

TEST(Base64Test, KnownVectors) {
  const auto enc = [](std::string s) {
    return Base64Encode(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
  const Bytes d = Base64Decode("Zm9vYg==");
  EXPECT_EQ(std::string(d.begin(), d.end()), "foob");
}

TEST(Base64Test, RejectsMalformed) {
  for (const char* s : {"Zm9", "Zm9v!A==", "Zg=A", "Zh==", "Z===", "Zm9v\nYmFy"}) {
    EXPECT_EQ(CodeOf([&] { Base64Decode(s); }), ErrorCode::kMalformedBase64) << s;
  }
}

TEST(EmbedTest, RoundTripAndPixelsUnchanged) {
  const Bytes png = SmallPng();
  const Bytes payload = Serialize(testing::RandomParams(32, EncoderConfig{}, 3), {6, 4});
  const Bytes out = EmbedPayload(png, payload);
  EXPECT_TRUE(HasPayload(out));
  EXPECT_FALSE(HasPayload(png));
  EXPECT_EQ(ExtractPayload(out), payload);
  const PngPixels a = DecodePng(png), b = DecodePng(out);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.bit_depth, b.bit_depth);
}

TEST(EmbedTest, ChunkSitsBeforeIendAndReplaceIsIdempotent) {
  const Bytes png = SmallPng();
  const Bytes p1 = Serialize(ZeroParams(8, EncoderConfig{}), {1, 1});
  const Bytes p2 = Serialize(ZeroParams(16, EncoderConfig{}), {2, 2});
  const Bytes once = EmbedPayload(png, p1);
  const Bytes twice = EmbedPayload(once, p2);
  const auto chunks = ParseChunks(twice);
  size_t count = 0;
  for (const auto& c : chunks) count += c.type_name() == "iTXt";
  EXPECT_EQ(count, 1u);
  EXPECT_EQ(chunks.back().type_name(), "IEND");
  EXPECT_EQ(chunks[chunks.size() - 2].type_name(), "iTXt");
  EXPECT_EQ(ExtractPayload(twice), p2);
  EXPECT_EQ(EmbedPayload(once, p1), once);
}

TEST(EmbedTest, MissingChunkAndCorruptText) {
  EXPECT_EQ(CodeOf([&] { ExtractPayload(SmallPng()); }), ErrorCode::kMissingMetadata);
  // Hand-build a GamutMLP chunk holding invalid base64.
  auto chunks = ParseChunks(SmallPng());
  PngChunk c;
  std::memcpy(c.type.data(), "iTXt", 4);
  const std::string body = std::string("GamutMLP") + std::string(5, '\0') + "@@@@";
  c.data.assign(body.begin(), body.end());
  chunks.insert(chunks.end() - 1, c);
  const Bytes bad = AssembleChunks(chunks);
  EXPECT_EQ(CodeOf([&] { ExtractPayload(bad); }), ErrorCode::kMalformedBase64);
  // Valid base64 of something that is not a payload.
  const Bytes junk = EmbedPayload(SmallPng(), Bytes{'J', 'U', 'N', 'K', 0});
  EXPECT_EQ(CodeOf([&] { ExtractPayload(junk); }), ErrorCode::kBadMagic);
}

TEST(SidecarTest, ReplacesExtension) {
  EXPECT_EQ(SidecarPath("dir/photo.png"), "dir/photo.gmlp");
  EXPECT_EQ(SidecarPath("photo"), "photo.gmlp");
}

}  // namespace
}  // namespace widegamut
