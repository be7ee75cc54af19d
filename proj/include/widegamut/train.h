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

// Per-image fitting of the residual MLP, meta-learned initialization, and
// whole-image prediction.

#ifndef WIDEGAMUT_TRAIN_H_
#define WIDEGAMUT_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "widegamut/image.h"
#include "widegamut/mlp.h"

namespace widegamut {

enum class OptimizerKind { kAdam, kSgd };

struct TrainConfig {
  EncoderConfig encoder;
  size_t hidden = 32;
  double ig_rate = 0.02;
  double og_rate = 0.20;
  size_t iterations = 9000;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  size_t batch_size = 10000;
  uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Record the mini-batch loss of every iteration in the result.
  bool record_history = false;

  // Iteration count used when starting from a meta-learned initialization.
  static constexpr size_t kFastIterations = 1200;

  // Throws Error(kInvalidArgument) on out-of-range fields.
  void Validate() const;
};

struct MetaConfig {
  size_t inner_iterations = 10000;
  double inner_lr = 1e-2;
  size_t meta_epochs = 1;
  double outer_rate = 0.1;

  void Validate() const;
};

// Pixel indices drawn for optimization, in ascending order within each set.
struct SampleSet {
  std::vector<size_t> in_gamut;
  std::vector<size_t> out_of_gamut;

  size_t size() const { return in_gamut.size() + out_of_gamut.size(); }
  // Both sets concatenated, in-gamut first.
  std::vector<size_t> All() const;
};

// Uniform sampling without replacement: ceil(ig_rate * |IG|) in-gamut and
// ceil(og_rate * |OG|) out-of-gamut pixels. An image without out-of-gamut
// pixels yields an empty OG set; the fit then only removes quantization
// error.
SampleSet SamplePixels(const GamutMask& mask, const TrainConfig& config,
                       uint64_t seed);

// Encoded features, clipped base colors and original targets for a fixed
// list of pixels.
struct TrainingSet {
  std::vector<size_t> pixels;
  std::vector<float> features;
  std::vector<float> base;
  std::vector<float> targets;

  size_t size() const { return pixels.size(); }
  Batch AsBatch() const;
};

TrainingSet BuildTrainingSet(const LinearRgbImage& original,
                             const LinearRgbImage& clipped,
                             std::span<const size_t> pixels,
                             const EncoderConfig& encoder);

struct OptimizeStats {
  size_t iterations = 0;
  size_t samples = 0;
  size_t og_samples = 0;
  // Summed squared error over the whole sample set before the first and
  // after the last step.
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double seconds = 0.0;
  std::vector<double> history;
};

struct OptimizeResult {
  MlpParams params;
  OptimizeStats stats;
  // The fitted samples and their predictions under the returned params.
  TrainingSet training_set;
  std::vector<float> final_predictions;
};

// The random init Optimize starts from for a given config.
MlpParams InitialParams(const TrainConfig& config);

// Standard optimization: random init from config.seed, then
// config.iterations optimizer steps on mini-batches drawn from one fixed
// sample set. Gradients are averaged over the mini-batch before each step.
OptimizeResult Optimize(const LinearRgbImage& original,
                        const LinearRgbImage& clipped, const GamutMask& mask,
                        const TrainConfig& config);

// As Optimize, starting from `init`. Throws Error(kDimensionMismatch) when
// init does not have the architecture config asks for.
OptimizeResult OptimizeFrom(const LinearRgbImage& original,
                            const LinearRgbImage& clipped,
                            const GamutMask& mask, const MlpParams& init,
                            const TrainConfig& config);

// OptimizeFrom with a meta-learned init; config.iterations is normally
// TrainConfig::kFastIterations.
OptimizeResult OptimizeFast(const LinearRgbImage& original,
                            const LinearRgbImage& clipped,
                            const GamutMask& mask, const MlpParams& init,
                            const TrainConfig& config);

struct MetaImage {
  LinearRgbImage original;
  LinearRgbImage clipped;
  GamutMask mask;
};

// First-order (Reptile) meta-training. For every epoch and every image in
// order: copy the meta params, run inner_iterations SGD steps at inner_lr on
// that image, then move the meta params outer_rate of the way toward the
// result. The inner run for image i in epoch e is exactly
// OptimizeFrom(image, meta, InnerConfig(base, meta_config, e * n + i)).
// Architecture, sampling and batch size come from `base`; the starting
// point is Optimize's random init for base.seed unless `init` is given.
TrainConfig InnerConfig(const TrainConfig& base, const MetaConfig& meta,
                        size_t run_index);

MlpParams MetaTrain(std::span<const MetaImage> images, const MetaConfig& meta,
                    const TrainConfig& base, const MlpParams* init = nullptr);

// Runs the network on every pixel: clamp(f(x, clipped(x)) + clipped(x)).
LinearRgbImage PredictImage(const LinearRgbImage& clipped, const MlpParams& params);

}  // namespace widegamut

#endif  // WIDEGAMUT_TRAIN_H_
