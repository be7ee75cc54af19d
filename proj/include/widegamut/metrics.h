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

#ifndef WIDEGAMUT_METRICS_H_
#define WIDEGAMUT_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "widegamut/image.h"
#include "widegamut/png_io.h"

namespace widegamut {

// PSNR uses peak 1.0. A zero RMSE reports +infinity.
struct QualityReport {
  double rmse = 0.0;
  double psnr = 0.0;
  // Absent when the mask has no out-of-gamut pixels.
  std::optional<double> rmse_og;
  std::optional<double> psnr_og;
  double og_fraction = 0.0;
};

double PsnrFromRmse(double rmse);

QualityReport Evaluate(const LinearRgbImage& pred, const LinearRgbImage& truth,
                       const GamutMask& mask);

// Corpus aggregate. `mean_*` average the per-image values; `pooled_*`
// compute one RMSE over all pixel-channels of the corpus.
struct CorpusReport {
  size_t images = 0;
  double mean_rmse = 0.0;
  double mean_psnr = 0.0;
  std::optional<double> mean_rmse_og;
  std::optional<double> mean_psnr_og;
  double pooled_rmse = 0.0;
  double pooled_psnr = 0.0;
  std::optional<double> pooled_rmse_og;
  std::optional<double> pooled_psnr_og;
};

struct ImageErrorSums {
  double sq = 0.0;
  size_t count = 0;
  double sq_og = 0.0;
  size_t count_og = 0;
};

ImageErrorSums ErrorSums(const LinearRgbImage& pred, const LinearRgbImage& truth,
                         const GamutMask& mask);

CorpusReport Summarize(std::span<const QualityReport> reports,
                       std::span<const ImageErrorSums> sums);

// Per-pixel RMSE over the three channels, row-major.
std::vector<float> ErrorMap(const LinearRgbImage& pred, const LinearRgbImage& truth);

// 8-bit grayscale PNG: gray = round(255 * min(1, rmse / scale)). The scale is
// stored in a tEXt chunk under kErrorScaleKeyword.
inline constexpr const char* kErrorScaleKeyword = "ErrorScale";
Bytes EncodeErrorMapPng(std::span<const float> error_map, size_t width,
                        size_t height, double scale);

// CIE xy of ProPhoto values (D50 primaries). Returns nullopt for black.
std::optional<std::pair<double, double>> Chromaticity(const Rgb& prophoto);

// xy pairs of every out-of-gamut, non-black pixel, in raster order.
std::vector<std::pair<double, double>> ChromaticityPoints(const LinearRgbImage& img,
                                                          const GamutMask& mask);

// CSV text with header "x,y".
std::string ChromaticityCsv(const LinearRgbImage& img, const GamutMask& mask);

}  // namespace widegamut

#endif  // WIDEGAMUT_METRICS_H_
