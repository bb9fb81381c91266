// Copyright 2026 The vidtex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vidtex/config.h"
#include "vidtex/error.h"
#include "vidtex/metrics.h"
#include "vidtex/pyramid.h"
#include "vidtex/sampler.h"
#include "vidtex/serialize.h"
#include "vidtex/synthetic.h"
#include "vidtex/training.h"
#include "vidtex/video_io.h"

namespace vidtex::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kVersion = "1.0.0";
constexpr std::string_view kRunManifest = "run_manifest.txt";

struct Options {
  // shared
  std::string input, out, model, config_file, profile = "full";
  uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> overrides;
  // sample
  int64_t height = 0, width = 0;
  // metrics / diversity
  std::string a, b, which = "ms-ssim,fid,dnlpips", features;
  std::vector<std::string> inputs;
  uint64_t net_seed = 0;
  // synth
  std::string kind = "advected-noise";
  int64_t frames = 16, size = 32;
};

std::string Quote(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

std::string ManifestHeader(std::string_view command, const std::vector<std::string>& args) {
  return fmt::format("command = {}\nversion = {}\nargs = {}\n", command, kVersion, Quote(args));
}

void WriteRunManifest(const fs::path& dir, const std::string& text) {
  fs::create_directories(dir);
  WriteTextFile(dir / kRunManifest, text);
}

std::string Indent(std::string_view prefix, const std::string& text) {
  std::istringstream lines(text);
  std::string out;
  for (std::string line; std::getline(lines, line);) out += fmt::format("{}{}\n", prefix, line);
  return out;
}

TrainConfig ResolveConfig(const Options& o) {
  TrainConfig config = TrainConfig::Profile(o.profile);
  if (!o.config_file.empty()) config.ApplyText(ReadTextFile(o.config_file));
  if (o.seed_set) config.seed = o.seed;
  for (const auto& kv : o.overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--set", fmt::format("expected key=value, got '{}'", kv));
    config.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.Validate();
  return config;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

ProxyFeatureNet ResolveNet(const Options& o) {
  return o.features.empty() ? ProxyFeatureNet(o.net_seed) : LoadFeatureNet(o.features);
}

int RunTrain(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const TrainConfig config = ResolveConfig(o);
  const VideoClip video = LoadVideo(o.input);
  const fs::path dir = o.out;
  fs::create_directories(dir);
  WriteRunManifest(dir, ManifestHeader("train", args) + fmt::format("input = {}\nsource_frames = {}\nprofile = {}\n",
                                                                     o.input, video.frames(), o.profile) +
                            Indent("config.", config.ToText()));

  std::ofstream log(dir / "train_log.tsv", std::ios::trunc);
  if (!log) throw DataError(fmt::format("cannot write {}", (dir / "train_log.tsv").string()));
  log << LogHeader() << "\n";
  const auto t0 = std::chrono::steady_clock::now();
  const int64_t report_every = std::max<int64_t>(1, config.steps_per_scale / 10);
  const PyramidModel model = TrainPyramid(video, config, [&](const TrainLogEntry& e) {
    log << FormatLogLine(e) << "\n";
    if (e.step % report_every == 0 || e.step + 1 == config.steps_per_scale) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out << fmt::format("scale {} step {}/{} rec {:.5g} d {:.5g} ({:.0f}s)\n", e.scale, e.step + 1,
                         config.steps_per_scale, e.report.rec_loss, e.report.d_loss, secs);
      out.flush();
    }
  });
  log.close();
  SaveModel(model, dir);
  for (size_t n = 0; n < model.scales.size(); ++n) {
    out << fmt::format("scale {} final_rec_loss {:.9g} noise_amp {:.9g}\n", n, model.scales[n].final_rec_loss,
                       model.scales[n].noise_amp);
  }
  return kExitOk;
}

int RunSample(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  if ((o.height > 0) != (o.width > 0)) throw CLI::ValidationError("--height/--width", "give both or neither");
  const PyramidModel model = LoadModel(o.model);
  std::optional<SpatialDims> dims;
  if (o.height > 0) dims = SpatialDims{o.height, o.width};
  const VideoClip clip = Sample(model, o.seed, dims);
  SaveVideo(clip, o.out);
  WriteRunManifest(o.out, ManifestHeader("sample", args) +
                              fmt::format("model = {}\nseed = {}\nshape = {}\nexperimental_size = {}\n", o.model,
                                          o.seed, clip.shape().ToString(), dims ? "true" : "false") +
                              Indent("model_config.", model.config.ToText()));
  out << fmt::format("wrote {} to {}\n", clip.shape().ToString(), o.out);
  return kExitOk;
}

int RunReconstruct(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const PyramidModel model = LoadModel(o.model);
  const VideoClip clip = Reconstruct(model);
  SaveVideo(clip, o.out);  // quantization clamps out-of-range values
  WriteRunManifest(o.out, ManifestHeader("reconstruct", args) + fmt::format("model = {}\nshape = {}\n", o.model,
                                                                            clip.shape().ToString()) +
                              Indent("model_config.", model.config.ToText()));
  out << fmt::format("wrote {} to {}\n", clip.shape().ToString(), o.out);
  return kExitOk;
}

void EmitReport(const MetricReport& report, const std::string& manifest, const Options& o, std::ostream& out) {
  out << report.ToTsv();
  if (!o.out.empty()) {
    WriteRunManifest(o.out, manifest);
    WriteTextFile(fs::path(o.out) / "report.tsv", report.ToTsv());
    WriteTextFile(fs::path(o.out) / "report.txt", report.ToKeyValue());
  }
}

int RunMetrics(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto which = SplitList(o.which);
  for (const auto& w : which) {
    if (w != "ms-ssim" && w != "fid" && w != "dnlpips") {
      throw CLI::ValidationError("--which", fmt::format("unknown metric '{}'", w));
    }
  }
  auto wants = [&](std::string_view m) { return std::find(which.begin(), which.end(), m) != which.end(); };
  const VideoClip a = LoadVideo(o.a);
  const VideoClip b = LoadVideo(o.b);
  const ProxyFeatureNet net = ResolveNet(o);
  MetricReport report;
  report.backbone = net.description();
  // A source video is usually longer than a sampled clip; MS-SSIM pairs the
  // first common frames.
  const int64_t common = std::min(a.frames(), b.frames());
  if (wants("ms-ssim")) {
    report.ms_ssim = MsSsimVideo(a.Slice(0, common), b.Slice(0, common));
    if (!o.model.empty()) {
      const PyramidModel model = LoadModel(o.model);
      const VideoClip rec = Reconstruct(model).Clamped();
      const VideoClip target = DownsampleVideo(a.Slice(0, model.frames), rec.height(), rec.width());
      report.ms_ssim_reconstruction = MsSsimVideo(rec, target);
    }
  }
  if (wants("fid")) report.fid = Fid(VideoFrames(a), VideoFrames(b), net);
  if (wants("dnlpips")) report.delta_n_lpips = DeltaNLpips(b, net);
  EmitReport(report,
             ManifestHeader("metrics", args) + fmt::format("a = {}\nb = {}\nwhich = {}\nnet_seed = {}\nfeatures = {}\n"
                                                           "ms_ssim_frames = {}\ndelta_n_lpips_of = b\n",
                                                           o.a, o.b, o.which, o.net_seed,
                                                           o.features.empty() ? "builtin" : o.features, common),
             o, out);
  return kExitOk;
}

int RunDiversity(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  std::vector<VideoClip> videos;
  for (const auto& dir : o.inputs) videos.push_back(LoadVideo(dir));
  const ProxyFeatureNet net = ResolveNet(o);
  MetricReport report;
  report.backbone = net.description();
  report.diversity = DiversityLpips(videos, net);
  EmitReport(report,
             ManifestHeader("diversity", args) + fmt::format("inputs = {}\nnet_seed = {}\nfeatures = {}\n",
                                                             Quote(o.inputs), o.net_seed,
                                                             o.features.empty() ? "builtin" : o.features),
             o, out);
  return kExitOk;
}

int RunSynth(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  SyntheticSpec spec;
  spec.kind = ParseSyntheticKind(o.kind);
  spec.frames = o.frames;
  spec.size = o.size;
  spec.seed = o.seed;
  if (spec.frames <= 0 || spec.size <= 0) throw CLI::ValidationError("--frames/--size", "must be positive");
  const VideoClip clip = MakeSynthetic(spec);
  SaveVideo(clip, o.out);
  WriteRunManifest(o.out, ManifestHeader("synth", args) +
                              fmt::format("kind = {}\nframes = {}\nsize = {}\nseed = {}\nvx = {}\nvy = {}\n"
                                          "angular_velocity = {}\nphase_len = {}\nnum_phases = {}\n",
                                          SyntheticKindName(spec.kind), spec.frames, spec.size, spec.seed, spec.vx,
                                          spec.vy, spec.angular_velocity, spec.phase_len, spec.num_phases));
  out << fmt::format("wrote {} to {}\n", clip.shape().ToString(), o.out);
  return kExitOk;
}

int RunPyramid(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const TrainConfig config = ResolveConfig(o);
  const VideoClip video = LoadVideo(o.input);
  const TrainingData data = PrepareTrainingData(video, config);
  std::string manifest = ManifestHeader("pyramid", args) +
                         fmt::format("input = {}\nschedule = {}\nr = {:.9g}\n", o.input, data.schedule.ToString(),
                                     data.schedule.r()) +
                         Indent("config.", config.ToText());
  for (size_t n = 0; n < data.levels.size(); ++n) {
    const fs::path dir = fs::path(o.out) / fmt::format("scale_{:02d}", n);
    SaveVideo(data.levels[n], dir);
    out << fmt::format("scale {} {} -> {}\n", n, data.levels[n].shape().ToString(), dir.string());
  }
  WriteRunManifest(o.out, manifest);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vidtex: single-video multi-scale GAN for dynamic textures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto add_seed = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--seed", o.seed, "Random seed");
    if (required) opt->required();
  };
  auto add_train_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_file, "key = value config file applied over the profile")
        ->check(CLI::ExistingFile);
    cmd->add_option("--profile", o.profile, "Base hyperparameters")->check(CLI::IsMember({"full", "desk"}));
    cmd->add_option("--set", o.overrides, "Extra key=value override, applied last (repeatable)");
  };

  auto* train = app.add_subcommand("train", "Train a pyramid on one video");
  train->add_option("--input", o.input, "Frame directory")->required();
  train->add_option("--out", o.out, "Model directory")->required();
  add_train_config(train);
  add_seed(train, false);

  auto* sample = app.add_subcommand("sample", "Generate a new video from a trained model");
  sample->add_option("--model", o.model, "Model directory")->required();
  sample->add_option("--out", o.out, "Output frame directory")->required();
  add_seed(sample, true);
  sample->add_option("--height", o.height, "Finest-level height (experimental)")->check(CLI::PositiveNumber);
  sample->add_option("--width", o.width, "Finest-level width (experimental)")->check(CLI::PositiveNumber);

  auto* reconstruct = app.add_subcommand("reconstruct", "Regenerate the training clip from the stored noise");
  reconstruct->add_option("--model", o.model, "Model directory")->required();
  reconstruct->add_option("--out", o.out, "Output frame directory")->required();

  auto* metrics = app.add_subcommand("metrics", "Compare two videos");
  metrics->add_option("--a", o.a, "Reference frame directory")->required();
  metrics->add_option("--b", o.b, "Compared frame directory")->required();
  metrics->add_option("--which", o.which, "Comma list of ms-ssim, fid, dnlpips");
  metrics->add_option("--net-seed", o.net_seed, "Seed of the proxy feature net");
  metrics->add_option("--features", o.features, "Directory with external feature weights");
  metrics->add_option("--model", o.model, "Also score this model's reconstruction against --a");
  metrics->add_option("--out", o.out, "Directory for report files and the run manifest");

  auto* diversity = app.add_subcommand("diversity", "Mean pairwise LPIPS-proxy distance");
  diversity->add_option("--inputs", o.inputs, "Comma list of frame directories")->required()->delimiter(',');
  diversity->add_option("--net-seed", o.net_seed, "Seed of the proxy feature net");
  diversity->add_option("--features", o.features, "Directory with external feature weights");
  diversity->add_option("--out", o.out, "Directory for report files and the run manifest");

  auto* synth = app.add_subcommand("synth", "Write a procedural texture video");
  synth->add_option("--kind", o.kind, "Texture kind")
      ->required()
      ->check(CLI::IsMember({"advected-noise", "translating-grating", "rotating-pattern", "multi-phase"}));
  synth->add_option("--frames", o.frames, "Frame count")->required();
  synth->add_option("--size", o.size, "Side length in pixels")->required();
  add_seed(synth, true);
  synth->add_option("--out", o.out, "Output frame directory")->required();

  auto* pyramid = app.add_subcommand("pyramid", "Dump every training level of a video (debug)");
  pyramid->add_option("--input", o.input, "Frame directory")->required();
  pyramid->add_option("--out", o.out, "Output directory")->required();
  add_train_config(pyramid);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.seed_set = train->count("--seed") > 0;

  try {
    if (*train) return RunTrain(o, args, out);
    if (*sample) return RunSample(o, args, out);
    if (*reconstruct) return RunReconstruct(o, args, out);
    if (*metrics) return RunMetrics(o, args, out);
    if (*diversity) return RunDiversity(o, args, out);
    if (*synth) return RunSynth(o, args, out);
    if (*pyramid) return RunPyramid(o, args, out);
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DimensionError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DegenerateInputError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace vidtex::cli
