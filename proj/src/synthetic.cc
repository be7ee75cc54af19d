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

#include "widegamut/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "widegamut/colorspace.h"
#include "widegamut/error.h"
#include "widegamut/random.h"

namespace widegamut {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sum of a few random plane waves, scaled into roughly [-1, 1].
class WaveField {
 public:
  WaveField(Rng& rng, int waves, double max_freq) {
    double total = 0.0;
    for (int i = 0; i < waves; ++i) {
      Wave w;
      w.fx = rng.Uniform(-max_freq, max_freq);
      w.fy = rng.Uniform(-max_freq, max_freq);
      w.phase = rng.Uniform(0.0, kTwoPi);
      w.amp = rng.Uniform(0.5, 1.0);
      total += w.amp;
      waves_.push_back(w);
    }
    scale_ = total > 0.0 ? 1.0 / total : 0.0;
  }

  double operator()(double u, double v) const {
    double s = 0.0;
    for (const Wave& w : waves_) s += w.amp * std::cos(kTwoPi * (w.fx * u + w.fy * v) + w.phase);
    return s * scale_;
  }

 private:
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> waves_;
  double scale_ = 0.0;
};

// Bilinearly interpolated lattice noise with the given cell size in pixels.
class LatticeNoise {
 public:
  LatticeNoise(Rng& rng, size_t width, size_t height, double cell)
      : cell_(cell),
        cols_(static_cast<size_t>(std::ceil(static_cast<double>(width) / cell)) + 2),
        rows_(static_cast<size_t>(std::ceil(static_cast<double>(height) / cell)) + 2),
        values_(cols_ * rows_) {
    for (double& v : values_) v = rng.Uniform(-1.0, 1.0);
  }

  double operator()(size_t x, size_t y) const {
    const double gx = static_cast<double>(x) / cell_;
    const double gy = static_cast<double>(y) / cell_;
    const size_t ix = static_cast<size_t>(gx), iy = static_cast<size_t>(gy);
    const double fx = gx - static_cast<double>(ix), fy = gy - static_cast<double>(iy);
    const auto at = [&](size_t cx, size_t cy) { return values_[cy * cols_ + cx]; };
    const double top = at(ix, iy) * (1 - fx) + at(ix + 1, iy) * fx;
    const double bot = at(ix, iy + 1) * (1 - fx) + at(ix + 1, iy + 1) * fx;
    return top * (1 - fy) + bot * fy;
  }

 private:
  double cell_;
  size_t cols_, rows_;
  std::vector<double> values_;
};

struct Fields {
  WaveField luminance;
  WaveField hue;
  WaveField saturation;
  LatticeNoise texture;
};

LinearRgbImage Render(const SyntheticOptions& o, const Fields& f, double sat) {
  // Opponent axes in ProPhoto RGB: red-vs-cyan and green-vs-magenta.
  constexpr std::array<double, 3> kAxisA = {1.0, -0.5, -0.5};
  constexpr std::array<double, 3> kAxisB = {0.0, 0.8660254037844386, -0.8660254037844386};
  LinearRgbImage img(o.width, o.height);
  for (size_t y = 0; y < o.height; ++y) {
    for (size_t x = 0; x < o.width; ++x) {
      const double u = static_cast<double>(x) / static_cast<double>(o.width);
      const double v = static_cast<double>(y) / static_cast<double>(o.height);
      const double lum = (0.42 + 0.22 * f.luminance(u, v)) *
                         (1.0 + o.texture * f.texture(x, y));
      const double h = std::numbers::pi * (1.0 + f.hue(u, v));
      const double s = sat * (0.55 + 0.45 * f.saturation(u, v));
      Rgb p{};
      for (int c = 0; c < 3; ++c) {
        const double chroma = std::cos(h) * kAxisA[c] + std::sin(h) * kAxisB[c];
        p[c] = static_cast<float>(std::clamp(lum * (1.0 + s * chroma), 0.0, 1.0));
      }
      img.set_pixel(y * o.width + x, p);
    }
  }
  return img;
}

double OutOfGamutFraction(const LinearRgbImage& img) {
  const ColorTransform& ct = ColorTransform::Get();
  size_t og = 0;
  for (size_t i = 0; i < img.pixel_count(); ++i) {
    const Rgb p = img.pixel(i);
    const auto lin = ct.ToLinearSrgb({p[0], p[1], p[2]});
    if (std::any_of(lin.begin(), lin.end(), [](double c) { return c < 0.0 || c > 1.0; })) {
      ++og;
    }
  }
  return static_cast<double>(og) / static_cast<double>(img.pixel_count());
}

}  // namespace

LinearRgbImage SyntheticImage(const SyntheticOptions& o) {
  if (o.width == 0 || o.height == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic image must be non-empty");
  }
  Rng rng(o.seed);
  const Fields f{WaveField(rng, 4, 2.5), WaveField(rng, 3, 1.5), WaveField(rng, 3, 2.0),
                 LatticeNoise(rng, o.width, o.height, o.texture_cell)};
  double sat = 0.3;
  LinearRgbImage img = Render(o, f, sat);
  while (OutOfGamutFraction(img) < o.min_og_fraction && sat < 3.0) {
    sat += 0.05;
    img = Render(o, f, sat);
  }
  return img;
}

LinearRgbImage RampImage(size_t width, size_t height) {
  LinearRgbImage img(width, height);
  for (size_t y = 0; y < height; ++y) {
    for (size_t x = 0; x < width; ++x) {
      const double t = width > 1 ? static_cast<double>(x) / static_cast<double>(width - 1) : 0.0;
      const double shade = 0.85 + 0.15 * (height > 1 ? static_cast<double>(y) /
                                                          static_cast<double>(height - 1)
                                                    : 0.0);
      const float r = static_cast<float>(shade * (0.45 - 0.35 * t));
      const float g = static_cast<float>(shade * (0.45 + 0.40 * t));
      const float b = static_cast<float>(shade * (0.45 - 0.30 * t));
      img.set_pixel(y * width + x, {r, g, b});
    }
  }
  return img;
}

}  // namespace widegamut
