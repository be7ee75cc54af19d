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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "widegamut/codec.h"
#include "widegamut/colorspace.h"
#include "widegamut/error.h"
#include "widegamut/metrics.h"
#include "widegamut/pipeline.h"
#include "widegamut/png_io.h"
#include "widegamut/synthetic.h"
#include "widegamut/train.h"

namespace widegamut::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kSeedEnv[] = "GAMUT_SEED";

// Writes key=value lines with a fixed float format so output is stable.
class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}

  void Put(std::string_view key, std::string_view value) {
    out_ << key << '=' << value << '\n';
  }
  void Put(std::string_view key, size_t value) { Put(key, std::to_string(value)); }
  void Put(std::string_view key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    Put(key, std::string_view(buf));
  }
  void Put(std::string_view key, const std::optional<double>& value) {
    if (value) Put(key, *value);
    else Put(key, std::string_view("none"));
  }
  void Quality(std::string_view prefix, const QualityReport& q) {
    const std::string p(prefix);
    Put(p + "rmse", q.rmse);
    Put(p + "psnr", q.psnr);
    Put(p + "rmse_og", q.rmse_og);
    Put(p + "psnr_og", q.psnr_og);
  }

 private:
  std::ostream& out_;
};

// Flags shared by reduce and meta-train.
struct ModelFlags {
  size_t hidden = 32;
  int k = 12;
  std::string input_mode = "xyrgb";
  bool no_encoding = false;
  std::optional<uint64_t> seed;

  void Register(CLI::App* app) {
    app->add_option("--hidden", hidden, "Hidden layer width")->check(CLI::PositiveNumber);
    app->add_option("--k", k, "Encoding frequencies per scalar")->check(CLI::Range(0, 63));
    app->add_option("--input-mode", input_mode, "Pixel descriptor: xyrgb, xy or rgb")
        ->check(CLI::IsMember({"xyrgb", "xy", "rgb"}));
    app->add_flag("--no-encoding", no_encoding,
                  "Feed raw scalars to the MLP (same as --k 0)");
    app->add_option("--seed", seed, "Random seed (falls back to $GAMUT_SEED, then 0)");
  }

  EncoderConfig Encoder() const {
    EncoderConfig e;
    e.mode = *ParseInputMode(input_mode);
    e.k = no_encoding ? 0 : k;
    return e;
  }

  uint64_t Seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0') {
        throw Error(ErrorCode::kInvalidArgument, std::string(kSeedEnv) + " is not an integer");
      }
      return v;
    }
    return 0;
  }
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results are written by
// index, so the caller's output order does not depend on scheduling. The
// first exception is rethrown after all workers finish.
void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)>& fn) {
  jobs = std::clamp<size_t>(jobs, 1, std::max<size_t>(n, 1));
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (size_t t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool IsPng(std::span<const uint8_t> bytes) {
  static constexpr uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::equal(kSig, kSig + 8, bytes.begin());
}

LinearRgbImage ReadProPhoto(const std::string& path) {
  return ProPhotoFromPng(DecodePng(ReadFile(path)));
}

// ---------------------------------------------------------------- reduce

struct ReduceFlags {
  std::string input, output, meta_init;
  size_t iterations = 9000;
  double lr = 1e-3;
  std::string optimizer = "adam";
  size_t batch_size = 10000;
  double ig_rate = 0.02, og_rate = 0.20;
  bool zero_init = false;
  bool sidecar = false;
  ModelFlags model;
};

int RunReduce(const ReduceFlags& f, const CLI::App& app, Report& out, std::ostream& err) {
  TrainConfig config;
  config.hidden = f.model.hidden;
  config.encoder = f.model.Encoder();
  config.iterations = f.iterations;
  config.learning_rate = f.lr;
  config.optimizer = f.optimizer == "sgd" ? OptimizerKind::kSgd : OptimizerKind::kAdam;
  config.batch_size = f.batch_size;
  config.ig_rate = f.ig_rate;
  config.og_rate = f.og_rate;
  config.seed = f.model.Seed();

  std::optional<MlpParams> meta;
  if (!f.meta_init.empty()) {
    meta = Deserialize(ReadFile(f.meta_init)).params;
    // The init file fixes the architecture unless flags say otherwise; a
    // conflict is reported by the optimizer before anything is written.
    if (app.count("--hidden") == 0) config.hidden = meta->hidden;
    if (app.count("--k") == 0 && app.count("--no-encoding") == 0 &&
        app.count("--input-mode") == 0) {
      config.encoder = meta->encoder;
    }
    if (app.count("--iters") == 0) config.iterations = TrainConfig::kFastIterations;
  }
  config.Validate();

  const LinearRgbImage original = ReadProPhoto(f.input);
  const ReductionResult r =
      ReduceAndEmbed(original, config, meta ? &*meta : nullptr, f.zero_init);
  if (r.no_out_of_gamut) {
    err << "warning: no out-of-gamut pixels; fitting quantization error from a zero init\n";
  }
  WriteFile(f.output, r.png);
  if (f.sidecar) WriteFile(SidecarPath(f.output), r.payload);

  out.Put("width", original.width());
  out.Put("height", original.height());
  out.Put("og_fraction", r.mask.OutOfGamutFraction());
  out.Put("hidden", config.hidden);
  out.Put("k", static_cast<size_t>(config.encoder.k));
  out.Put("input_mode", InputModeName(config.encoder.mode));
  out.Put("init", meta ? "meta" : f.zero_init ? "zero" : "random");
  out.Put("iterations", r.stats.iterations);
  out.Put("samples", r.stats.samples);
  out.Put("og_samples", r.stats.og_samples);
  out.Put("initial_loss", r.stats.initial_loss);
  out.Put("final_loss", r.stats.final_loss);
  out.Put("seconds", r.stats.seconds);
  out.Put("payload_bytes", r.payload.size());
  out.Quality("clip_", Evaluate(r.clipped, original, r.mask));
  out.Quality("", Evaluate(r.validation, original, r.mask));
  return 0;
}

// ---------------------------------------------------------------- expand

struct ExpandFlags {
  std::string input, output, payload;
  bool naive = false;
};

int RunExpand(const ExpandFlags& f, Report& out) {
  const Bytes png = ReadFile(f.input);
  if (f.naive) {
    const SrgbImage srgb = SrgbFromPng(DecodePng(png));
    WriteFile(f.output, EncodeProPhotoPng(ExpandGamutNaive(srgb)));
    out.Put("width", srgb.width());
    out.Put("height", srgb.height());
    out.Put("method", "naive");
    return 0;
  }
  std::string payload_path = f.payload;
  if (payload_path.empty() && !HasPayload(png) && fs::exists(SidecarPath(f.input))) {
    payload_path = SidecarPath(f.input);
  }
  const ExpansionResult r = payload_path.empty()
                                ? ExpandAndRecover(png)
                                : ExpandWithPayload(png, ReadFile(payload_path));
  WriteFile(f.output, EncodeProPhotoPng(r.recovered));
  out.Put("width", r.recovered.width());
  out.Put("height", r.recovered.height());
  out.Put("method", "mlp");
  out.Put("payload", payload_path.empty() ? "embedded" : payload_path);
  out.Put("hidden", r.params.hidden);
  out.Put("k", static_cast<size_t>(r.params.encoder.k));
  out.Put("input_mode", InputModeName(r.params.encoder.mode));
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalFlags {
  std::vector<std::string> pred, truth, mask;
  std::string error_map, chroma_csv;
  double error_scale = 0.05;
  size_t jobs = 1;
};

int RunEval(const EvalFlags& f, Report& out) {
  if (f.pred.size() != f.truth.size()) {
    throw Error(ErrorCode::kInvalidArgument, "--pred and --truth need the same count");
  }
  if (!f.mask.empty() && f.mask.size() != f.pred.size()) {
    throw Error(ErrorCode::kInvalidArgument, "--mask count must match --pred");
  }
  if ((!f.error_map.empty() || !f.chroma_csv.empty()) && f.pred.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "--error-map and --chroma-csv need exactly one image pair");
  }
  const size_t n = f.pred.size();
  std::vector<QualityReport> reports(n);
  std::vector<ImageErrorSums> sums(n);
  std::vector<LinearRgbImage> preds(n);
  std::vector<GamutMask> masks(n);
  ParallelFor(n, f.jobs, [&](size_t i) {
    preds[i] = ReadProPhoto(f.pred[i]);
    const LinearRgbImage truth = ReadProPhoto(f.truth[i]);
    // Without a mask file the OG set is recomputed from the ground truth.
    masks[i] = f.mask.empty() ? ReduceGamut(truth, /*quantize=*/false).mask
                              : MaskFromPng(DecodePng(ReadFile(f.mask[i])));
    reports[i] = Evaluate(preds[i], truth, masks[i]);
    sums[i] = ErrorSums(preds[i], truth, masks[i]);
    if (!f.error_map.empty()) {
      WriteFile(f.error_map, EncodeErrorMapPng(ErrorMap(preds[i], truth), truth.width(),
                                               truth.height(), f.error_scale));
    }
  });
  if (!f.chroma_csv.empty()) {
    const std::string csv = ChromaticityCsv(preds[0], masks[0]);
    WriteFile(f.chroma_csv, std::span(reinterpret_cast<const uint8_t*>(csv.data()), csv.size()));
  }

  for (size_t i = 0; i < n; ++i) {
    const std::string p = n > 1 ? "image" + std::to_string(i) + "." : "";
    out.Quality(p, reports[i]);
    out.Put(p + "og_fraction", reports[i].og_fraction);
  }
  if (n > 1) {
    const CorpusReport c = Summarize(reports, sums);
    out.Put("images", c.images);
    out.Put("mean_rmse", c.mean_rmse);
    out.Put("mean_psnr", c.mean_psnr);
    out.Put("mean_rmse_og", c.mean_rmse_og);
    out.Put("mean_psnr_og", c.mean_psnr_og);
    out.Put("pooled_rmse", c.pooled_rmse);
    out.Put("pooled_psnr", c.pooled_psnr);
    out.Put("pooled_rmse_og", c.pooled_rmse_og);
    out.Put("pooled_psnr_og", c.pooled_psnr_og);
  }
  return 0;
}

// ---------------------------------------------------------------- meta-train

struct MetaFlags {
  std::vector<std::string> images;
  std::string output;
  size_t inner_iterations = 10000;
  double inner_lr = 1e-2;
  size_t epochs = 1;
  double outer_rate = 0.1;
  size_t jobs = 1;
  ModelFlags model;
};

std::vector<std::string> ExpandImageList(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const std::string& in : inputs) {
    if (!fs::is_directory(in)) {
      out.push_back(in);
      continue;
    }
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") {
        found.push_back(entry.path().string());
      }
    }
    // Directory order is unspecified; sort for determinism.
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

int RunMetaTrain(const MetaFlags& f, Report& out) {
  TrainConfig base;
  base.hidden = f.model.hidden;
  base.encoder = f.model.Encoder();
  base.seed = f.model.Seed();
  MetaConfig meta;
  meta.inner_iterations = f.inner_iterations;
  meta.inner_lr = f.inner_lr;
  meta.meta_epochs = f.epochs;
  meta.outer_rate = f.outer_rate;
  base.Validate();
  meta.Validate();

  const std::vector<std::string> paths = ExpandImageList(f.images);
  if (paths.empty()) throw Error(ErrorCode::kInvalidArgument, "no meta-training images");
  std::vector<MetaImage> images(paths.size());
  ParallelFor(paths.size(), f.jobs, [&](size_t i) {
    images[i].original = ReadProPhoto(paths[i]);
    GamutReduction red = ReduceGamut(images[i].original, /*quantize=*/true);
    images[i].clipped = std::move(red.clipped_prophoto);
    images[i].mask = std::move(red.mask);
  });
  const auto start = std::chrono::steady_clock::now();
  const MlpParams theta = MetaTrain(images, meta, base);
  const Bytes payload = Serialize(theta, ImageDims{});
  WriteFile(f.output, payload);

  out.Put("images", paths.size());
  out.Put("epochs", f.epochs);
  out.Put("inner_iterations", f.inner_iterations);
  out.Put("hidden", theta.hidden);
  out.Put("k", static_cast<size_t>(theta.encoder.k));
  out.Put("input_mode", InputModeName(theta.encoder.mode));
  out.Put("payload_bytes", payload.size());
  out.Put("seconds",
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return 0;
}

// ---------------------------------------------------------------- inspect

int RunInspect(const std::string& input, Report& out) {
  const Bytes bytes = ReadFile(input);
  const bool png = IsPng(bytes);
  const Bytes payload = png ? ExtractPayload(bytes) : bytes;
  const PayloadHeader h = ReadPayloadHeader(payload);
  const MlpShape shape(h.encoder.feature_dim(), h.hidden);
  out.Put("source", png ? "png" : "payload");
  out.Put("magic", "GMLP");
  out.Put("version", static_cast<size_t>(h.version));
  out.Put("hidden", static_cast<size_t>(h.hidden));
  out.Put("k", static_cast<size_t>(h.encoder.k));
  out.Put("input_mode", InputModeName(h.encoder.mode));
  out.Put("encoding", h.encoder.encoding_enabled() ? "on" : "off");
  out.Put("width", static_cast<size_t>(h.dims.width));
  out.Put("height", static_cast<size_t>(h.dims.height));
  out.Put("param_count", shape.param_count());
  out.Put("payload_bytes", payload.size());
  // Full validation after the header is reported, so a truncated payload
  // still shows what it claims to be.
  Deserialize(payload);
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  std::string output, mask;
  size_t width = 256, height = 256;
  double min_og = 0.10;
  ModelFlags model;
};

int RunSynth(const SynthFlags& f, Report& out) {
  SyntheticOptions o;
  o.width = f.width;
  o.height = f.height;
  o.seed = f.model.Seed();
  o.min_og_fraction = f.min_og;
  const LinearRgbImage img = SyntheticImage(o);
  const GamutMask mask = ReduceGamut(img, /*quantize=*/false).mask;
  WriteFile(f.output, EncodeProPhotoPng(img));
  if (!f.mask.empty()) WriteFile(f.mask, EncodeMaskPng(mask));
  out.Put("width", img.width());
  out.Put("height", img.height());
  out.Put("og_fraction", mask.OutOfGamutFraction());
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Wide-gamut color recovery: embed a per-image MLP in sRGB PNGs",
               "widegamut");
  app.require_subcommand(1);

  ReduceFlags reduce;
  CLI::App* c_reduce =
      app.add_subcommand("reduce", "ProPhoto 16-bit PNG -> sRGB 8-bit PNG with embedded model");
  c_reduce->add_option("--input", reduce.input, "16-bit ProPhoto PNG")
      ->required()->check(CLI::ExistingFile);
  c_reduce->add_option("--output", reduce.output, "Output sRGB PNG")->required();
  c_reduce->add_option("--iters", reduce.iterations,
                       "Optimization iterations (default 9000, 1200 with --meta-init)");
  c_reduce->add_option("--lr", reduce.lr, "Learning rate")->check(CLI::PositiveNumber);
  c_reduce->add_option("--optimizer", reduce.optimizer, "adam or sgd")
      ->check(CLI::IsMember({"adam", "sgd"}));
  c_reduce->add_option("--batch-size", reduce.batch_size, "Samples per step")
      ->check(CLI::PositiveNumber);
  c_reduce->add_option("--ig-rate", reduce.ig_rate, "Fraction of in-gamut pixels sampled");
  c_reduce->add_option("--og-rate", reduce.og_rate, "Fraction of out-of-gamut pixels sampled");
  c_reduce->add_option("--meta-init", reduce.meta_init, "Initial parameters (.gmlp)")
      ->check(CLI::ExistingFile);
  c_reduce->add_flag("--zero-init", reduce.zero_init,
                     "Start from all-zero parameters (with --iters 0: naive expansion)");
  c_reduce->add_flag("--sidecar", reduce.sidecar, "Also write the payload to <output>.gmlp");
  reduce.model.Register(c_reduce);

  ExpandFlags expand;
  CLI::App* c_expand =
      app.add_subcommand("expand", "sRGB PNG -> recovered 16-bit ProPhoto PNG");
  c_expand->add_option("--input", expand.input, "sRGB PNG")->required()->check(CLI::ExistingFile);
  c_expand->add_option("--output", expand.output, "Output ProPhoto PNG")->required();
  c_expand->add_option("--payload", expand.payload,
                       "Payload file to use instead of the embedded one")
      ->check(CLI::ExistingFile);
  c_expand->add_flag("--naive", expand.naive, "Plain conversion, ignoring any payload");

  EvalFlags eval;
  CLI::App* c_eval = app.add_subcommand("eval", "Compare recovered and ground-truth ProPhoto PNGs");
  c_eval->add_option("--pred", eval.pred, "Predicted PNG (repeatable)")
      ->required()->check(CLI::ExistingFile);
  c_eval->add_option("--truth", eval.truth, "Ground-truth PNG (repeatable)")
      ->required()->check(CLI::ExistingFile);
  c_eval->add_option("--mask", eval.mask, "Out-of-gamut mask PNG (repeatable)")
      ->check(CLI::ExistingFile);
  c_eval->add_option("--error-map", eval.error_map, "Write a per-pixel RMSE PNG");
  c_eval->add_option("--error-scale", eval.error_scale, "RMSE mapped to white in the error map")
      ->check(CLI::PositiveNumber);
  c_eval->add_option("--chroma-csv", eval.chroma_csv,
                     "Write xy chromaticities of predicted OG pixels");
  c_eval->add_option("--jobs", eval.jobs, "Images evaluated in parallel")
      ->check(CLI::PositiveNumber);

  MetaFlags meta;
  CLI::App* c_meta = app.add_subcommand("meta-train", "Reptile meta-initialization");
  c_meta->add_option("--images", meta.images, "Directory or ProPhoto PNG files (repeatable)")
      ->required();
  c_meta->add_option("--output", meta.output, "Output parameters (.gmlp)")->required();
  c_meta->add_option("--inner-iters", meta.inner_iterations, "SGD steps per image")
      ->check(CLI::PositiveNumber);
  c_meta->add_option("--inner-lr", meta.inner_lr, "Inner SGD learning rate")
      ->check(CLI::PositiveNumber);
  c_meta->add_option("--epochs", meta.epochs, "Passes over the image list")
      ->check(CLI::PositiveNumber);
  c_meta->add_option("--outer-rate", meta.outer_rate, "Reptile step size")
      ->check(CLI::NonNegativeNumber);
  c_meta->add_option("--jobs", meta.jobs, "Images loaded in parallel")
      ->check(CLI::PositiveNumber);
  meta.model.Register(c_meta);

  std::string inspect_input;
  CLI::App* c_inspect = app.add_subcommand("inspect", "Print the payload header");
  c_inspect->add_option("--input", inspect_input, "sRGB PNG or .gmlp file")
      ->required()->check(CLI::ExistingFile);

  SynthFlags synth;
  CLI::App* c_synth = app.add_subcommand("synth", "Write a synthetic ProPhoto test image");
  c_synth->add_option("--output", synth.output, "Output ProPhoto PNG")->required();
  c_synth->add_option("--mask", synth.mask, "Also write the out-of-gamut mask");
  c_synth->add_option("--width", synth.width, "Width")->check(CLI::PositiveNumber);
  c_synth->add_option("--height", synth.height, "Height")->check(CLI::PositiveNumber);
  c_synth->add_option("--min-og", synth.min_og, "Minimum out-of-gamut fraction")
      ->check(CLI::Range(0.0, 0.9));
  c_synth->add_option("--seed", synth.model.seed, "Random seed (falls back to $GAMUT_SEED)");

  // CLI11 consumes a reversed argument vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Report report(out);
  try {
    if (c_reduce->parsed()) return RunReduce(reduce, *c_reduce, report, err);
    if (c_expand->parsed()) return RunExpand(expand, report);
    if (c_eval->parsed()) return RunEval(eval, report);
    if (c_meta->parsed()) return RunMetaTrain(meta, report);
    if (c_inspect->parsed()) return RunInspect(inspect_input, report);
    if (c_synth->parsed()) return RunSynth(synth, report);
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace widegamut::cli
