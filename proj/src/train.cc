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

#include "widegamut/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "widegamut/encoder.h"
#include "widegamut/error.h"
#include "widegamut/optimizer.h"
#include "widegamut/random.h"

namespace widegamut {

namespace {

// Seed streams derived from TrainConfig::seed.
constexpr uint64_t kInitStream = 0;
constexpr uint64_t kSampleStream = 1;
constexpr uint64_t kBatchStream = 2;

// Predictions are produced in chunks of this many pixels.
constexpr size_t kPredictChunk = 4096;

void CheckRate(double r, const char* name) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name) + " must be in (0,1], got " + std::to_string(r));
  }
}

// k of items chosen uniformly without replacement, returned ascending.
std::vector<size_t> Choose(std::vector<size_t> items, size_t k, Rng& rng) {
  k = std::min(k, items.size());
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Below(items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  std::sort(items.begin(), items.end());
  return items;
}

size_t CeilFraction(double rate, size_t n) {
  // Subtract a hair so exact products (0.02 * 1000) do not round up.
  return static_cast<size_t>(std::ceil(rate * static_cast<double>(n) - 1e-9));
}

void CheckImages(const LinearRgbImage& original, const LinearRgbImage& clipped,
                 const GamutMask& mask) {
  if (!original.SameShape(clipped) || original.width() != mask.width() ||
      original.height() != mask.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "original, clipped and mask dimensions differ");
  }
  if (original.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
}

void CheckArchitecture(const MlpParams& init, const TrainConfig& config) {
  ValidateParams(init);
  if (!(init.encoder == config.encoder) || init.hidden != config.hidden) {
    throw Error(ErrorCode::kDimensionMismatch,
                "initial parameters do not match the configured architecture");
  }
}

}  // namespace

void TrainConfig::Validate() const {
  CheckRate(ig_rate, "ig_rate");
  CheckRate(og_rate, "og_rate");
  if (hidden == 0) throw Error(ErrorCode::kInvalidArgument, "hidden must be >= 1");
  if (batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be positive");
  }
  if (encoder.k < 0 || encoder.k > 63) {
    throw Error(ErrorCode::kInvalidArgument, "k must be in [0,63]");
  }
}

void MetaConfig::Validate() const {
  if (inner_iterations == 0 || meta_epochs == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "inner_iterations and meta_epochs must be positive");
  }
  if (!(inner_lr > 0.0)) throw Error(ErrorCode::kInvalidArgument, "inner_lr must be positive");
  if (!(outer_rate >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "outer_rate must be non-negative");
  }
}

std::vector<size_t> SampleSet::All() const {
  std::vector<size_t> all = in_gamut;
  all.insert(all.end(), out_of_gamut.begin(), out_of_gamut.end());
  return all;
}

SampleSet SamplePixels(const GamutMask& mask, const TrainConfig& config,
                       uint64_t seed) {
  CheckRate(config.ig_rate, "ig_rate");
  CheckRate(config.og_rate, "og_rate");
  if (mask.pixel_count() == 0) throw Error(ErrorCode::kInvalidArgument, "empty mask");
  std::vector<size_t> ig, og;
  for (size_t i = 0; i < mask.pixel_count(); ++i) (mask[i] ? og : ig).push_back(i);
  Rng rng(seed);
  SampleSet s;
  const size_t n_ig = CeilFraction(config.ig_rate, ig.size());
  const size_t n_og = CeilFraction(config.og_rate, og.size());
  s.in_gamut = Choose(std::move(ig), n_ig, rng);
  s.out_of_gamut = Choose(std::move(og), n_og, rng);
  return s;
}

Batch TrainingSet::AsBatch() const {
  return Batch{size(), features, base, targets};
}

TrainingSet BuildTrainingSet(const LinearRgbImage& original,
                             const LinearRgbImage& clipped,
                             std::span<const size_t> pixels,
                             const EncoderConfig& encoder) {
  TrainingSet t;
  t.pixels.assign(pixels.begin(), pixels.end());
  t.features = EncodePixels(encoder, clipped, pixels);
  t.base.resize(3 * pixels.size());
  t.targets.resize(3 * pixels.size());
  for (size_t i = 0; i < pixels.size(); ++i) {
    const Rgb b = clipped.pixel(pixels[i]);
    const Rgb o = original.pixel(pixels[i]);
    std::copy(b.begin(), b.end(), t.base.begin() + 3 * i);
    std::copy(o.begin(), o.end(), t.targets.begin() + 3 * i);
  }
  return t;
}

MlpParams InitialParams(const TrainConfig& config) {
  return InitParams(config.hidden, config.encoder,
                    DeriveSeed(config.seed, kInitStream));
}

OptimizeResult OptimizeFrom(const LinearRgbImage& original,
                            const LinearRgbImage& clipped,
                            const GamutMask& mask, const MlpParams& init,
                            const TrainConfig& config) {
  config.Validate();
  CheckImages(original, clipped, mask);
  CheckArchitecture(init, config);
  const auto start = std::chrono::steady_clock::now();

  const SampleSet samples =
      SamplePixels(mask, config, DeriveSeed(config.seed, kSampleStream));
  OptimizeResult result;
  result.params = init;
  result.training_set =
      BuildTrainingSet(original, clipped, samples.All(), config.encoder);
  const TrainingSet& set = result.training_set;
  result.stats.samples = set.size();
  result.stats.og_samples = samples.out_of_gamut.size();

  MlpEngine engine;
  const Batch full = set.AsBatch();
  result.stats.initial_loss = engine.Loss(result.params, full);

  const size_t n = set.size();
  const size_t batch = std::min(config.batch_size, n);
  const size_t dim = config.encoder.feature_dim();
  const bool whole_set = batch == n;

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<float> features, base, targets;
  if (!whole_set) {
    features.resize(batch * dim);
    base.resize(batch * 3);
    targets.resize(batch * 3);
  }
  std::vector<float> grads(result.params.values.size());
  Adam adam(grads.size(), AdamOptions{config.learning_rate, config.adam_beta1,
                                      config.adam_beta2, config.adam_eps});
  Rng rng(DeriveSeed(config.seed, kBatchStream));
  const float inv_batch = 1.0f / static_cast<float>(batch);
  if (config.record_history) result.stats.history.reserve(config.iterations);

  for (size_t it = 0; it < config.iterations && n > 0; ++it) {
    Batch mb = full;
    if (!whole_set) {
      // Partial Fisher-Yates: the first `batch` entries of order become a
      // fresh uniform subset each iteration.
      for (size_t k = 0; k < batch; ++k) {
        const size_t j = k + static_cast<size_t>(rng.Below(n - k));
        std::swap(order[k], order[j]);
        const size_t src = order[k];
        std::copy_n(set.features.begin() + src * dim, dim,
                    features.begin() + k * dim);
        std::copy_n(set.base.begin() + src * 3, 3, base.begin() + k * 3);
        std::copy_n(set.targets.begin() + src * 3, 3, targets.begin() + k * 3);
      }
      mb = Batch{batch, features, base, targets};
    }
    const double loss = engine.LossAndGrads(result.params, mb, grads);
    if (config.record_history) result.stats.history.push_back(loss);
    for (float& g : grads) g *= inv_batch;
    if (config.optimizer == OptimizerKind::kAdam) {
      adam.Step(result.params.values, grads);
    } else {
      SgdStep(result.params.values, grads, config.learning_rate);
    }
  }
  result.stats.iterations = n > 0 ? config.iterations : 0;

  result.final_predictions.resize(3 * n);
  engine.Predict(result.params, n, set.features, set.base, result.final_predictions);
  double final_loss = 0.0;
  for (size_t i = 0; i < 3 * n; ++i) {
    const double r = static_cast<double>(result.final_predictions[i]) - set.targets[i];
    final_loss += r * r;
  }
  result.stats.final_loss = final_loss;
  for (float& v : result.final_predictions) v = std::clamp(v, 0.0f, 1.0f);
  result.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

OptimizeResult Optimize(const LinearRgbImage& original,
                        const LinearRgbImage& clipped, const GamutMask& mask,
                        const TrainConfig& config) {
  config.Validate();
  return OptimizeFrom(original, clipped, mask, InitialParams(config), config);
}

OptimizeResult OptimizeFast(const LinearRgbImage& original,
                            const LinearRgbImage& clipped,
                            const GamutMask& mask, const MlpParams& init,
                            const TrainConfig& config) {
  return OptimizeFrom(original, clipped, mask, init, config);
}

TrainConfig InnerConfig(const TrainConfig& base, const MetaConfig& meta,
                        size_t run_index) {
  TrainConfig c = base;
  c.optimizer = OptimizerKind::kSgd;
  c.learning_rate = meta.inner_lr;
  c.iterations = meta.inner_iterations;
  c.seed = DeriveSeed(base.seed, 1000 + run_index);
  c.record_history = false;
  return c;
}

MlpParams MetaTrain(std::span<const MetaImage> images, const MetaConfig& meta,
                    const TrainConfig& base, const MlpParams* init) {
  meta.Validate();
  base.Validate();
  if (images.empty()) throw Error(ErrorCode::kInvalidArgument, "no meta-training images");
  MlpParams theta = init != nullptr ? *init : InitialParams(base);
  CheckArchitecture(theta, base);
  const float rate = static_cast<float>(meta.outer_rate);
  for (size_t epoch = 0; epoch < meta.meta_epochs; ++epoch) {
    for (size_t i = 0; i < images.size(); ++i) {
      const MetaImage& img = images[i];
      const TrainConfig inner = InnerConfig(base, meta, epoch * images.size() + i);
      const OptimizeResult r =
          OptimizeFrom(img.original, img.clipped, img.mask, theta, inner);
      for (size_t p = 0; p < theta.values.size(); ++p) {
        // std::lerp is exact at both ends, so rate 1 copies the inner result.
        theta.values[p] = std::lerp(theta.values[p], r.params.values[p], rate);
      }
    }
  }
  return theta;
}

LinearRgbImage PredictImage(const LinearRgbImage& clipped, const MlpParams& params) {
  ValidateParams(params);
  const size_t n = clipped.pixel_count();
  const size_t dim = params.encoder.feature_dim();
  LinearRgbImage out(clipped.width(), clipped.height());
  MlpEngine engine;
  std::vector<float> features(kPredictChunk * dim);
  std::vector<float> pred(kPredictChunk * 3);
  const auto base_all = clipped.values();
  auto out_all = out.values();
  for (size_t begin = 0; begin < n; begin += kPredictChunk) {
    const size_t count = std::min(kPredictChunk, n - begin);
    for (size_t i = 0; i < count; ++i) {
      EncodePixel(params.encoder, clipped, begin + i,
                  std::span<float>(features.data() + i * dim, dim));
    }
    engine.Predict(params, count,
                   std::span<const float>(features.data(), count * dim),
                   base_all.subspan(3 * begin, 3 * count),
                   std::span<float>(pred.data(), 3 * count));
    for (size_t i = 0; i < 3 * count; ++i) {
      out_all[3 * begin + i] = std::clamp(pred[i], 0.0f, 1.0f);
    }
  }
  return out;
}

}  // namespace widegamut
