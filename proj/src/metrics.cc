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

#include "widegamut/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "widegamut/colorspace.h"
#include "widegamut/error.h"

namespace widegamut {
namespace {

// ProPhoto (ROMM RGB) to CIE XYZ, D50.
constexpr Mat3 kProPhotoToXyz = {{
    {0.7976749, 0.1351917, 0.0313534},
    {0.2880402, 0.7118741, 0.0000857},
    {0.0000000, 0.0000000, 0.8252100},
}};

void CheckShapes(const LinearRgbImage& a, const LinearRgbImage& b) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kDimensionMismatch, "images have different dimensions");
  }
}

}  // namespace

double PsnrFromRmse(double rmse) {
  if (rmse <= 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(1.0 / rmse);
}

ImageErrorSums ErrorSums(const LinearRgbImage& pred, const LinearRgbImage& truth,
                         const GamutMask& mask) {
  CheckShapes(pred, truth);
  if (mask.width() != pred.width() || mask.height() != pred.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask dimensions differ from image");
  }
  ImageErrorSums s;
  const auto p = pred.values();
  const auto t = truth.values();
  for (size_t i = 0; i < pred.pixel_count(); ++i) {
    double px = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = static_cast<double>(p[3 * i + c]) - t[3 * i + c];
      px += d * d;
    }
    s.sq += px;
    s.count += 3;
    if (mask[i]) {
      s.sq_og += px;
      s.count_og += 3;
    }
  }
  return s;
}

QualityReport Evaluate(const LinearRgbImage& pred, const LinearRgbImage& truth,
                       const GamutMask& mask) {
  const ImageErrorSums s = ErrorSums(pred, truth, mask);
  QualityReport r;
  r.rmse = s.count > 0 ? std::sqrt(s.sq / static_cast<double>(s.count)) : 0.0;
  r.psnr = PsnrFromRmse(r.rmse);
  if (s.count_og > 0) {
    r.rmse_og = std::sqrt(s.sq_og / static_cast<double>(s.count_og));
    r.psnr_og = PsnrFromRmse(*r.rmse_og);
  }
  r.og_fraction = mask.OutOfGamutFraction();
  return r;
}

CorpusReport Summarize(std::span<const QualityReport> reports,
                       std::span<const ImageErrorSums> sums) {
  CorpusReport c;
  c.images = reports.size();
  if (reports.empty()) return c;
  double rmse_og = 0.0, psnr_og = 0.0;
  size_t n_og = 0;
  for (const QualityReport& r : reports) {
    c.mean_rmse += r.rmse;
    c.mean_psnr += r.psnr;
    if (r.rmse_og) {
      rmse_og += *r.rmse_og;
      psnr_og += *r.psnr_og;
      ++n_og;
    }
  }
  c.mean_rmse /= static_cast<double>(reports.size());
  c.mean_psnr /= static_cast<double>(reports.size());
  if (n_og > 0) {
    c.mean_rmse_og = rmse_og / static_cast<double>(n_og);
    c.mean_psnr_og = psnr_og / static_cast<double>(n_og);
  }
  ImageErrorSums total;
  for (const ImageErrorSums& s : sums) {
    total.sq += s.sq;
    total.count += s.count;
    total.sq_og += s.sq_og;
    total.count_og += s.count_og;
  }
  if (total.count > 0) {
    c.pooled_rmse = std::sqrt(total.sq / static_cast<double>(total.count));
    c.pooled_psnr = PsnrFromRmse(c.pooled_rmse);
  }
  if (total.count_og > 0) {
    c.pooled_rmse_og = std::sqrt(total.sq_og / static_cast<double>(total.count_og));
    c.pooled_psnr_og = PsnrFromRmse(*c.pooled_rmse_og);
  }
  return c;
}

std::vector<float> ErrorMap(const LinearRgbImage& pred, const LinearRgbImage& truth) {
  CheckShapes(pred, truth);
  std::vector<float> out(pred.pixel_count());
  const auto p = pred.values();
  const auto t = truth.values();
  for (size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = static_cast<double>(p[3 * i + c]) - t[3 * i + c];
      s += d * d;
    }
    out[i] = static_cast<float>(std::sqrt(s / 3.0));
  }
  return out;
}

Bytes EncodeErrorMapPng(std::span<const float> error_map, size_t width,
                        size_t height, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "error scale must be positive");
  if (error_map.size() != width * height) {
    throw Error(ErrorCode::kDimensionMismatch, "error map size mismatch");
  }
  std::vector<uint16_t> gray(error_map.size());
  for (size_t i = 0; i < gray.size(); ++i) {
    const double v = std::min(1.0, static_cast<double>(error_map[i]) / scale);
    gray[i] = static_cast<uint16_t>(std::lround(255.0 * v));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", scale);
  const TextEntry text[] = {{kErrorScaleKeyword, buf}};
  return EncodePng(static_cast<uint32_t>(width), static_cast<uint32_t>(height), 8, 1,
                   gray, text);
}

std::optional<std::pair<double, double>> Chromaticity(const Rgb& prophoto) {
  double xyz[3];
  for (int r = 0; r < 3; ++r) {
    xyz[r] = kProPhotoToXyz[r][0] * prophoto[0] + kProPhotoToXyz[r][1] * prophoto[1] +
             kProPhotoToXyz[r][2] * prophoto[2];
  }
  const double sum = xyz[0] + xyz[1] + xyz[2];
  if (sum <= 0.0) return std::nullopt;
  return std::make_pair(xyz[0] / sum, xyz[1] / sum);
}

std::vector<std::pair<double, double>> ChromaticityPoints(const LinearRgbImage& img,
                                                          const GamutMask& mask) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask dimensions differ from image");
  }
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i < img.pixel_count(); ++i) {
    if (!mask[i]) continue;
    if (auto xy = Chromaticity(img.pixel(i))) out.push_back(*xy);
  }
  return out;
}

std::string ChromaticityCsv(const LinearRgbImage& img, const GamutMask& mask) {
  std::string out = "x,y\n";
  char buf[64];
  for (const auto& [x, y] : ChromaticityPoints(img, mask)) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", x, y);
    out += buf;
  }
  return out;
}

}  // namespace widegamut
