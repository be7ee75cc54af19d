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

#include "widegamut/png_io.h"

#include <png.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "widegamut/error.h"

namespace widegamut {
namespace {

constexpr uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

struct ReadCursor {
  std::span<const uint8_t> data;
  size_t pos = 0;
};

struct ErrorSink {
  char message[256] = {0};
};

void OnPngError(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  if (sink != nullptr) std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

void ReadFromCursor(png_structp png, png_bytep out, png_size_t len) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->data.size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, cur->data.data() + cur->pos, len);
  cur->pos += len;
}

void WriteToVector(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void FlushNothing(png_structp) {}

uint32_t ReadU32BE(const uint8_t* p) {
  return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) | (uint32_t{p[2]} << 8) |
         uint32_t{p[3]};
}

void AppendU32BE(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t ChunkCrc(const PngChunk& c) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(c.type.data()), 4);
  if (!c.data.empty()) {
    crc = crc32(crc, c.data.data(), static_cast<uInt>(c.data.size()));
  }
  return static_cast<uint32_t>(crc);
}

// Everything that needs unwinding lives outside the setjmp frame.
bool DecodeInto(std::span<const uint8_t> png_bytes, PngPixels& out,
                std::vector<png_bytep>& rows, ErrorSink& sink) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, OnPngError, OnPngWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  ReadCursor cursor{png_bytes, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &cursor, ReadFromCursor);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  const size_t row_bytes = png_get_rowbytes(png, info);
  if (png_get_channels(png, info) != 3 || (out_depth != 8 && out_depth != 16)) {
    png_error(png, "unsupported PNG layout");
  }
  out.width = width;
  out.height = height;
  out.bit_depth = out_depth;
  // Raw rows are staged in `samples` itself (16-bit storage is large
  // enough for either depth) and widened in place afterwards.
  out.samples.resize(static_cast<size_t>(width) * height * 3);
  rows.resize(height);
  auto* base = reinterpret_cast<png_bytep>(out.samples.data());
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = base + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool EncodeInto(uint32_t width, uint32_t height, int bit_depth, int channels,
                std::span<const TextEntry> text, std::vector<png_bytep>& rows,
                std::vector<png_text>& text_chunks, Bytes& out, ErrorSink& sink) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, OnPngError, OnPngWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, WriteToVector, FlushNothing);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  text_chunks.resize(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    std::memset(&text_chunks[i], 0, sizeof(png_text));
    text_chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
    text_chunks[i].key = const_cast<char*>(text[i].keyword.c_str());
    text_chunks[i].text = const_cast<char*>(text[i].text.c_str());
    text_chunks[i].text_length = text[i].text.size();
  }
  if (!text_chunks.empty()) {
    png_set_text(png, info, text_chunks.data(), static_cast<int>(text_chunks.size()));
  }
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void CheckDepth(const PngPixels& px, int depth, const char* what) {
  if (px.bit_depth != depth) {
    throw Error(ErrorCode::kPng, std::string(what) + ": expected " +
                                     std::to_string(depth) + "-bit PNG, got " +
                                     std::to_string(px.bit_depth) + "-bit");
  }
}

}  // namespace

PngPixels DecodePng(std::span<const uint8_t> png) {
  if (png.size() < 8 || std::memcmp(png.data(), kSignature, 8) != 0) {
    throw Error(ErrorCode::kPng, "not a PNG file");
  }
  PngPixels out;
  std::vector<png_bytep> rows;
  ErrorSink sink;
  if (!DecodeInto(png, out, rows, sink)) {
    throw Error(ErrorCode::kPng, std::string("PNG decode failed: ") + sink.message);
  }
  // Widen in place: rows hold big-endian 16-bit or packed 8-bit samples.
  const size_t count = out.samples.size();
  auto* raw = reinterpret_cast<const uint8_t*>(out.samples.data());
  std::vector<uint16_t> samples(count);
  const size_t row_samples = static_cast<size_t>(out.width) * 3;
  const size_t row_bytes = row_samples * (out.bit_depth == 16 ? 2 : 1);
  for (size_t y = 0; y < out.height; ++y) {
    const uint8_t* r = raw + y * row_bytes;
    for (size_t i = 0; i < row_samples; ++i) {
      samples[y * row_samples + i] =
          out.bit_depth == 16 ? static_cast<uint16_t>((r[2 * i] << 8) | r[2 * i + 1])
                              : r[i];
    }
  }
  out.samples = std::move(samples);
  return out;
}

Bytes EncodePng(uint32_t width, uint32_t height, int bit_depth, int channels,
                std::span<const uint16_t> samples, std::span<const TextEntry> text) {
  if ((bit_depth != 8 && bit_depth != 16) || (channels != 1 && channels != 3)) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported PNG output layout");
  }
  const size_t row_samples = static_cast<size_t>(width) * channels;
  if (samples.size() != row_samples * height || width == 0 || height == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "PNG sample count mismatch");
  }
  const size_t bytes_per = bit_depth == 16 ? 2 : 1;
  Bytes packed(row_samples * height * bytes_per);
  for (size_t i = 0; i < samples.size(); ++i) {
    if (bit_depth == 16) {
      packed[2 * i] = static_cast<uint8_t>(samples[i] >> 8);
      packed[2 * i + 1] = static_cast<uint8_t>(samples[i] & 0xff);
    } else {
      packed[i] = static_cast<uint8_t>(std::min<uint16_t>(samples[i], 255));
    }
  }
  std::vector<png_bytep> rows(height);
  for (uint32_t y = 0; y < height; ++y) {
    rows[y] = packed.data() + y * row_samples * bytes_per;
  }
  std::vector<png_text> text_chunks;
  Bytes out;
  ErrorSink sink;
  if (!EncodeInto(width, height, bit_depth, channels, text, rows, text_chunks, out,
                  sink)) {
    throw Error(ErrorCode::kPng, std::string("PNG encode failed: ") + sink.message);
  }
  return out;
}

LinearRgbImage ProPhotoFromPng(const PngPixels& px) {
  CheckDepth(px, 16, "ProPhoto input");
  LinearRgbImage img(px.width, px.height);
  auto v = img.values();
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<float>(px.samples[i] / 65535.0);
  }
  return img;
}

SrgbImage SrgbFromPng(const PngPixels& px) {
  CheckDepth(px, 8, "sRGB input");
  SrgbImage img(px.width, px.height, /*quantized=*/true);
  auto v = img.values();
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<float>(px.samples[i] / 255.0);
  }
  return img;
}

Bytes EncodeProPhotoPng(const LinearRgbImage& img) {
  std::vector<uint16_t> s(img.values().size());
  const auto v = img.values();
  for (size_t i = 0; i < s.size(); ++i) {
    s[i] = static_cast<uint16_t>(
        std::lround(std::clamp(static_cast<double>(v[i]), 0.0, 1.0) * 65535.0));
  }
  return EncodePng(static_cast<uint32_t>(img.width()),
                   static_cast<uint32_t>(img.height()), 16, 3, s);
}

Bytes EncodeSrgbPng(const SrgbImage& img) {
  std::vector<uint16_t> s(img.values().size());
  const auto v = img.values();
  for (size_t i = 0; i < s.size(); ++i) {
    s[i] = static_cast<uint16_t>(
        std::lround(std::clamp(static_cast<double>(v[i]), 0.0, 1.0) * 255.0));
  }
  return EncodePng(static_cast<uint32_t>(img.width()),
                   static_cast<uint32_t>(img.height()), 8, 3, s);
}

Bytes EncodeMaskPng(const GamutMask& mask) {
  std::vector<uint16_t> s(mask.pixel_count());
  for (size_t i = 0; i < s.size(); ++i) s[i] = mask[i] ? 255 : 0;
  return EncodePng(static_cast<uint32_t>(mask.width()),
                   static_cast<uint32_t>(mask.height()), 8, 1, s);
}

GamutMask MaskFromPng(const PngPixels& px) {
  // Gray input was expanded to RGB on decode; any nonzero red sample marks
  // the pixel.
  GamutMask mask(px.width, px.height);
  for (size_t i = 0; i < mask.pixel_count(); ++i) mask.set(i, px.samples[3 * i] != 0);
  return mask;
}

std::vector<PngChunk> ParseChunks(std::span<const uint8_t> png) {
  if (png.size() < 8 || std::memcmp(png.data(), kSignature, 8) != 0) {
    throw Error(ErrorCode::kPng, "not a PNG file");
  }
  std::vector<PngChunk> chunks;
  size_t pos = 8;
  while (pos < png.size()) {
    if (png.size() - pos < 12) throw Error(ErrorCode::kPng, "truncated PNG chunk header");
    const uint32_t len = ReadU32BE(png.data() + pos);
    if (png.size() - pos - 12 < len) throw Error(ErrorCode::kPng, "truncated PNG chunk");
    PngChunk c;
    std::memcpy(c.type.data(), png.data() + pos + 4, 4);
    c.data.assign(png.begin() + pos + 8, png.begin() + pos + 8 + len);
    if (ReadU32BE(png.data() + pos + 8 + len) != ChunkCrc(c)) {
      throw Error(ErrorCode::kPng, "PNG chunk CRC mismatch");
    }
    pos += 12 + len;
    const bool end = c.type_name() == "IEND";
    chunks.push_back(std::move(c));
    if (end) break;
  }
  if (chunks.empty() || chunks.back().type_name() != "IEND") {
    throw Error(ErrorCode::kPng, "PNG has no IEND chunk");
  }
  return chunks;
}

Bytes AssembleChunks(std::span<const PngChunk> chunks) {
  Bytes out(std::begin(kSignature), std::end(kSignature));
  for (const PngChunk& c : chunks) {
    AppendU32BE(out, static_cast<uint32_t>(c.data.size()));
    out.insert(out.end(), c.type.begin(), c.type.end());
    out.insert(out.end(), c.data.begin(), c.data.end());
    AppendU32BE(out, ChunkCrc(c));
  }
  return out;
}

std::vector<TextEntry> ReadTextChunks(std::span<const uint8_t> png) {
  std::vector<TextEntry> out;
  for (const PngChunk& c : ParseChunks(png)) {
    if (c.type_name() != "tEXt") continue;
    const auto nul = std::find(c.data.begin(), c.data.end(), uint8_t{0});
    if (nul == c.data.end()) continue;
    out.push_back({std::string(c.data.begin(), nul), std::string(nul + 1, c.data.end())});
  }
  return out;
}

Bytes ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  return data;
}

void WriteFile(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace widegamut
