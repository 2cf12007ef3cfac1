// Copyright 2026 The EARS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ears/config.hpp"
#include "ears/error.hpp"
#include "ears/evaluation.hpp"
#include "ears/metrics.hpp"
#include "ears/mixer.hpp"
#include "ears/nnet/checkpoint.hpp"
#include "ears/parallel.hpp"
#include "ears/pipeline.hpp"
#include "ears/synth.hpp"
#include "ears/trainer.hpp"
#include "ears/wav_io.hpp"

namespace ears::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --seed, then the config's seed key, then EARS_SEED.
void ResolveSeed(KeyValueConfig& cfg, const std::optional<std::uint64_t>& flag) {
  if (flag) {
    cfg.Set("seed", std::to_string(*flag));
    return;
  }
  if (cfg.Has("seed")) return;
  if (const char* env = std::getenv("EARS_SEED"); env != nullptr && *env != '\0') {
    cfg.Set("seed", env);
  }
}

std::uint64_t SeedOrEnv(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  KeyValueConfig cfg;
  ResolveSeed(cfg, std::nullopt);
  return cfg.GetU64("seed", fallback);
}

struct MixArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct FeaturesArgs {
  std::string manifest;
  std::string frontend = "gt";
  std::string out;
  int jobs = 1;
};

struct TrainArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int prefetch = 0;
};

struct EnhanceArgs {
  std::string checkpoint;
  std::string in;
  std::string out;
  std::string manifest;
  std::string out_dir;
  int jobs = 1;
};

struct EvalArgs {
  std::string clean, noisy, enhanced;
  bool json = false;
  std::string file, snr, noise, frontend, arch;
  std::string manifest, checkpoint, enhanced_dir;
  int jobs = 1;
};

struct CompareArgs {
  std::string checkpoint;
  std::string manifests;
  std::string out;
  int jobs = 1;
};

struct SynthArgs {
  std::string out;
  std::optional<std::uint64_t> seed;
  synth::CorpusLayout layout;
};

int RunMix(const MixArgs& a, std::ostream& out) {
  KeyValueConfig cfg = KeyValueConfig::Load(a.config);
  ResolveSeed(cfg, a.seed);
  const auto manifests = BuildCorpus(CorpusConfig::FromConfig(cfg));
  for (const auto& p : WriteCorpus(manifests, a.out)) out << p.string() << '\n';
  return kExitOk;
}

int RunFeatures(const FeaturesArgs& a, std::ostream& out) {
  const FrontendConfig frontend = FrontendConfig::FromTag(a.frontend);
  const auto specs = ReadManifest(a.manifest);
  if (specs.empty()) throw Error(Errc::kEmptyManifest, "empty manifest " + a.manifest);
  LoadExamples(specs, frontend, a.jobs, a.out);
  out << specs.size() << " feature files in " << a.out << '\n';
  return kExitOk;
}

int RunTrain(const TrainArgs& a, std::ostream& out) {
  KeyValueConfig cfg = KeyValueConfig::Load(a.config);
  ResolveSeed(cfg, a.seed);
  if (!a.out.empty()) cfg.Set("out", a.out);
  TrainConfig config = TrainConfig::FromConfig(cfg);
  if (a.prefetch > 0) config.jobs = a.prefetch;
  const TrainResult r = RunTraining(config);
  out << "best epoch " << r.best_epoch << " valid_loss " << r.history[r.best_epoch].valid_loss
      << " -> " << config.out.string() << '\n';
  return kExitOk;
}

int RunEnhance(const EnhanceArgs& a, std::ostream& out) {
  const nnet::Checkpoint ckpt = nnet::LoadCheckpoint(a.checkpoint);
  if (!a.manifest.empty()) {
    const auto specs = ReadManifest(a.manifest);
    const fs::path dir = a.out_dir;
    fs::create_directories(dir);
    const int workers = std::max(1, a.jobs);
    std::vector<std::unique_ptr<Enhancer>> models;
    for (int w = 0; w < workers; ++w) models.push_back(std::make_unique<Enhancer>(ckpt));
    ParallelFor(specs.size(), workers, [&](std::size_t i, int w) {
      const LoadedMixture m = RealizeMixture(specs[i]);
      WriteWav(dir / EnhancedFileName(specs[i]), models[static_cast<std::size_t>(w)]->Run(m.mix.noisy));
    });
    out << specs.size() << " files enhanced into " << dir.string() << '\n';
    return kExitOk;
  }
  const Waveform noisy = ReadWav(a.in, kPipelineRate);
  WriteWav(a.out, Enhance(noisy, ckpt));
  return kExitOk;
}

int RunEval(const EvalArgs& a, std::ostream& out) {
  if (!a.manifest.empty()) {
    const auto specs = ReadManifest(a.manifest);
    const nnet::Checkpoint ckpt = nnet::LoadCheckpoint(a.checkpoint);
    for (const auto& s : EvaluateManifest(specs, ckpt, a.jobs, a.enhanced_dir)) {
      out << ReportJson(s.context, s.report) << '\n';
    }
    return kExitOk;
  }
  const Waveform clean = ReadWav(a.clean, kPipelineRate);
  const Waveform noisy = ReadWav(a.noisy, kPipelineRate);
  const Waveform enhanced = ReadWav(a.enhanced, kPipelineRate);
  const DeltaReport r = ComputeDeltaReport(clean, noisy, enhanced);
  if (a.json) {
    ReportContext ctx{a.file.empty() ? a.enhanced : a.file, a.snr, a.noise, a.frontend, a.arch};
    out << ReportJson(ctx, r) << '\n';
    return kExitOk;
  }
  out << "segsnr_noisy " << r.segsnr_noisy << "\nsegsnr_enh " << r.segsnr_enh << "\ncd_noisy "
      << r.cd_noisy << "\ncd_enh " << r.cd_enh << "\ndelta_segsnr " << r.delta_segsnr
      << "\ndelta_cd " << r.delta_cd << '\n';
  return kExitOk;
}

int RunCompare(const CompareArgs& a, std::ostream& out) {
  const nnet::Checkpoint ckpt = nnet::LoadCheckpoint(a.checkpoint);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.manifests)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("test_", 0) == 0 && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(Errc::kEmptyManifest, "no test_*.jsonl in " + a.manifests);
  std::string csv = SummaryCsvHeader();
  for (const auto& f : files) {
    const auto specs = ReadManifest(f);
    if (specs.empty()) continue;
    csv += SummaryCsvRow(Summarize(EvaluateManifest(specs, ckpt, a.jobs), specs.front().snr_db));
  }
  if (a.out.empty()) {
    out << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    f << csv;
    if (!f) throw Error(Errc::kIoError, "cannot write " + a.out);
  }
  return kExitOk;
}

int RunSynth(SynthArgs a, std::ostream& out) {
  a.layout.seed = SeedOrEnv(a.seed, a.layout.seed);
  const auto files = synth::WriteCorpus(a.out, a.layout);
  out << files.size() << " files written under " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cochlear front-end speech enhancement toolkit", "ears"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "Build train/valid/test manifests from a corpus config");
  mix_cmd->add_option("--config", mix.config, "Corpus config file")->required()->check(CLI::ExistingFile);
  mix_cmd->add_option("--out", mix.out, "Output directory")->required();
  mix_cmd->add_option("--seed", mix.seed, "Master seed");

  FeaturesArgs feat;
  auto* feat_cmd = app.add_subcommand("features", "Precompute the per-utterance feature cache");
  feat_cmd->add_option("--manifest", feat.manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  feat_cmd->add_option("--frontend", feat.frontend, "Front-end tag (gt, drnl, carfac)");
  feat_cmd->add_option("--out", feat.out, "Cache directory")->required();
  feat_cmd->add_option("--jobs", feat.jobs, "Worker threads")->check(CLI::PositiveNumber);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a mask estimator");
  train_cmd->add_option("--config", train.config, "Training config file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Checkpoint path (overrides the config)");
  train_cmd->add_option("--seed", train.seed, "Seed");
  train_cmd->add_option("--jobs-prefetch", train.prefetch, "Feature extraction threads")
      ->check(CLI::PositiveNumber);

  EnhanceArgs enh;
  auto* enh_cmd = app.add_subcommand("enhance", "Enhance noisy speech with a checkpoint");
  enh_cmd->add_option("--checkpoint", enh.checkpoint, "Checkpoint")->required()->check(CLI::ExistingFile);
  auto* enh_in = enh_cmd->add_option("--in", enh.in, "Noisy WAV")->check(CLI::ExistingFile);
  auto* enh_out = enh_cmd->add_option("--out", enh.out, "Enhanced WAV");
  auto* enh_manifest = enh_cmd->add_option("--manifest", enh.manifest, "Manifest of mixtures")
                           ->check(CLI::ExistingFile);
  auto* enh_dir = enh_cmd->add_option("--out-dir", enh.out_dir, "Output directory for --manifest");
  enh_cmd->add_option("--jobs", enh.jobs, "Worker threads")->check(CLI::PositiveNumber);
  enh_in->needs(enh_out);
  enh_out->needs(enh_in);
  enh_manifest->needs(enh_dir);
  enh_dir->needs(enh_manifest);
  enh_in->excludes(enh_manifest);

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Score enhanced speech (segSNR, CD and deltas)");
  auto* ev_clean = ev_cmd->add_option("--clean", ev.clean, "Clean reference WAV")->check(CLI::ExistingFile);
  auto* ev_noisy = ev_cmd->add_option("--noisy", ev.noisy, "Noisy WAV")->check(CLI::ExistingFile);
  auto* ev_enh = ev_cmd->add_option("--enhanced", ev.enhanced, "Enhanced WAV")->check(CLI::ExistingFile);
  ev_cmd->add_flag("--json", ev.json, "Print one JSON report line");
  ev_cmd->add_option("--file", ev.file, "Report file field");
  ev_cmd->add_option("--snr", ev.snr, "Report snr_condition field");
  ev_cmd->add_option("--noise", ev.noise, "Report noise_type field");
  ev_cmd->add_option("--frontend", ev.frontend, "Report frontend field");
  ev_cmd->add_option("--arch", ev.arch, "Report arch field");
  auto* ev_manifest = ev_cmd->add_option("--manifest", ev.manifest, "Enhance and score a manifest")
                          ->check(CLI::ExistingFile);
  auto* ev_ckpt = ev_cmd->add_option("--checkpoint", ev.checkpoint, "Checkpoint for --manifest")
                      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--enhanced-dir", ev.enhanced_dir, "Also write enhanced WAVs here");
  ev_cmd->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::PositiveNumber);
  ev_clean->needs(ev_noisy, ev_enh);
  ev_noisy->needs(ev_clean, ev_enh);
  ev_enh->needs(ev_clean, ev_noisy);
  ev_manifest->needs(ev_ckpt);
  ev_ckpt->needs(ev_manifest);
  ev_manifest->excludes(ev_clean);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Score a checkpoint on every test condition as CSV");
  cmp_cmd->add_option("--checkpoint", cmp.checkpoint, "Checkpoint")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--manifests", cmp.manifests, "Directory with test_*.jsonl")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmp_cmd->add_option("--out", cmp.out, "CSV path (default: standard output)");
  cmp_cmd->add_option("--jobs", cmp.jobs, "Worker threads")->check(CLI::PositiveNumber);

  SynthArgs syn;
  auto* syn_cmd = app.add_subcommand("synth", "Write a synthetic clean-speech and noise corpus");
  syn_cmd->add_option("--out", syn.out, "Output directory")->required();
  syn_cmd->add_option("--seed", syn.seed, "Seed");
  syn_cmd->add_option("--train", syn.layout.train, "Training utterances")->check(CLI::NonNegativeNumber);
  syn_cmd->add_option("--valid", syn.layout.valid, "Validation utterances")->check(CLI::NonNegativeNumber);
  syn_cmd->add_option("--test", syn.layout.test, "Test utterances")->check(CLI::NonNegativeNumber);
  syn_cmd->add_option("--noise-seconds", syn.layout.noise_seconds, "Length of each noise file")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (enh_cmd->parsed() && enh.in.empty() && enh.manifest.empty()) {
      throw UsageError("enhance needs --in/--out or --manifest/--out-dir");
    }
    if (ev_cmd->parsed() && ev.clean.empty() && ev.manifest.empty()) {
      throw UsageError("eval needs --clean/--noisy/--enhanced or --manifest/--checkpoint");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  }

  try {
    if (mix_cmd->parsed()) return RunMix(mix, out);
    if (feat_cmd->parsed()) return RunFeatures(feat, out);
    if (train_cmd->parsed()) return RunTrain(train, out);
    if (enh_cmd->parsed()) return RunEnhance(enh, out);
    if (ev_cmd->parsed()) return RunEval(ev, out);
    if (cmp_cmd->parsed()) return RunCompare(cmp, out);
    if (syn_cmd->parsed()) return RunSynth(syn, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ears::cli
