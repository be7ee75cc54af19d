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

// Seeded synthetic wide-gamut test images: smooth saturated color fields
// with fine luminance texture, standing in for camera-rendered ProPhoto
// photographs.

#ifndef WIDEGAMUT_SYNTHETIC_H_
#define WIDEGAMUT_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "widegamut/image.h"

namespace widegamut {

struct SyntheticOptions {
  size_t width = 256;
  size_t height = 256;
  uint64_t seed = 1;
  // Saturation is raised until at least this fraction of pixels is out of
  // the sRGB gamut.
  double min_og_fraction = 0.10;
  // Amplitude of the pixel-scale multiplicative luminance texture.
  double texture = 0.06;
  // Lattice spacing of that texture, in pixels.
  double texture_cell = 2.5;
};

LinearRgbImage SyntheticImage(const SyntheticOptions& options);

// Simple smooth horizontal ramp from neutral gray to saturated ProPhoto
// green; the right part of the image is out of gamut.
LinearRgbImage RampImage(size_t width, size_t height);

}  // namespace widegamut

#endif  // WIDEGAMUT_SYNTHETIC_H_
