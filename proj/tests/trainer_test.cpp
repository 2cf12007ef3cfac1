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

#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "ears/mixer.hpp"
#include "ears/trainer.hpp"
#include "ears/wav_io.hpp"
#include "test_signals.hpp"

namespace ears {
namespace {

using Catch::Approx;
using testing::ThrownCode;
using testing::TempDir;

// Targets are a fixed squashing of the current frame, so a network can fit
// them without seeing any audio.
std::vector<Example> ToyExamples(std::uint64_t seed, int count, int frames) {
  Rng rng(seed);
  std::vector<Example> out;
  for (int u = 0; u < count; ++u) {
    Example ex;
    ex.features.resize(frames, 128);
    for (Eigen::Index i = 0; i < ex.features.size(); ++i) ex.features.data()[i] = rng.Uniform(-2.0, 2.0);
    ex.target = ex.features.leftCols(64).unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-2.0 * v)); });
    out.push_back(std::move(ex));
  }
  return out;
}

TrainConfig ToyConfig(nnet::ArchKind arch) {
  TrainConfig c = TrainConfig::Defaults(arch);
  c.hidden = 32;
  c.epochs = 5;
  c.seed = 9;
  c.lr = 0.003;
  if (arch == nnet::ArchKind::kMlp) c.batch_size = 64;
  return c;
}

TEST_CASE("defaults per architecture") {
  const TrainConfig mlp = TrainConfig::Defaults(nnet::ArchKind::kMlp);
  CHECK(mlp.lr == 1e-3);
  CHECK(mlp.batch_size == 1024);
  CHECK(mlp.keep_prob == 0.9);
  CHECK(mlp.Spec().ToString() == "mlp:896-128-128-128-64");
  const TrainConfig lstm = TrainConfig::Defaults(nnet::ArchKind::kLstm);
  CHECK(lstm.lr == 1e-4);
  CHECK(lstm.epochs == 200);
  CHECK(lstm.batch_size == 16);
  CHECK(lstm.Spec().input_dim() == 128);
  CHECK(lstm.Spec().output_dim() == 64);
}

TEST_CASE("config parsing") {
  const auto c = TrainConfig::FromConfig(
      KeyValueConfig::Parse("arch = lstm\nepochs = 3\nhidden = 512\nfrontend = drnl\n"));
  CHECK(c.arch == nnet::ArchKind::kLstm);
  CHECK(c.epochs == 3);
  CHECK(c.lr == 1e-4);
  CHECK(c.Spec().ToString() == "lstm:128-512-512-64");
  for (const char* bad : {"arch = cnn\n", "lr = 0\n", "epochs = 0\n", "keep_prob = 1.5\n",
                          "batch = 3\n", "frontend = fft\n"}) {
    CHECK(ThrownCode([&] { TrainConfig::FromConfig(KeyValueConfig::Parse(bad)); }).has_value());
  }
  CHECK(ThrownCode([] { TrainConfig::FromConfig(KeyValueConfig::Parse("batch = 3\n")); }) ==
        Errc::kConfig);
}

TEST_CASE("mlp overfits a tiny set") {
  const auto train = ToyExamples(1, 2, 40);
  TrainConfig c = ToyConfig(nnet::ArchKind::kMlp);
  c.keep_prob = 1.0;
  c.hidden = 64;
  c.lr = 0.01;
  c.epochs = 150;
  c.batch_size = 16;
  const TrainResult r = Train(c, train, train);
  CHECK(r.history.back().train_loss < 0.01);
  CHECK(r.history[1].train_loss < r.history[0].train_loss);
}

TEST_CASE("lstm loss falls") {
  const auto train = ToyExamples(2, 4, 30);
  TrainConfig c = ToyConfig(nnet::ArchKind::kLstm);
  c.lr = 0.01;
  c.batch_size = 2;
  c.epochs = 20;
  const TrainResult r = Train(c, train, train);
  CHECK(r.history[1].valid_loss < r.history[0].valid_loss);
  CHECK(r.history.back().valid_loss < 0.5 * r.history[0].valid_loss);
}

TEST_CASE("long recordings are chunked") {
  const auto train = ToyExamples(3, 1, kMaxSequenceFrames + 37);
  TrainConfig c = ToyConfig(nnet::ArchKind::kLstm);
  c.epochs = 1;
  int batches = 0;
  TrainHooks hooks;
  hooks.on_batch = [&](int, int, double) { ++batches; };
  c.batch_size = 1;
  Train(c, train, train, hooks);
  CHECK(batches == 2);
}

TEST_CASE("same seed, same bytes") {
  const auto train = ToyExamples(4, 3, 50);
  const auto valid = ToyExamples(5, 1, 50);
  for (auto arch : {nnet::ArchKind::kMlp, nnet::ArchKind::kLstm}) {
    const TrainConfig c = ToyConfig(arch);
    const auto a = nnet::SerializeCheckpoint(Train(c, train, valid).best);
    const auto b = nnet::SerializeCheckpoint(Train(c, train, valid).best);
    CHECK(a == b);
    TrainConfig other = c;
    other.seed = c.seed + 1;
    CHECK(nnet::SerializeCheckpoint(Train(other, train, valid).best) != a);
  }
}

TEST_CASE("the best checkpoint has the lowest validation loss") {
  const auto train = ToyExamples(6, 3, 40);
  const auto valid = ToyExamples(7, 1, 40);
  TrainConfig c = ToyConfig(nnet::ArchKind::kMlp);
  c.epochs = 8;
  c.lr = 0.05;  // large enough to wander
  std::vector<std::pair<double, std::string>> seen;
  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochStats& st, const nnet::Checkpoint& ck) {
    seen.emplace_back(st.valid_loss, nnet::SerializeCheckpoint(ck));
  };
  const TrainResult r = Train(c, train, valid, hooks);
  REQUIRE(seen.size() == 9);
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i].first < seen[argmin].first) argmin = i;
  }
  CHECK(r.best_epoch == static_cast<int>(argmin));
  CHECK(nnet::SerializeCheckpoint(r.best) == seen[argmin].second);
  CHECK(r.history.size() == 9);
  CHECK(r.history[0].epoch == 0);

  // Reloading reproduces the recorded loss exactly.
  auto model = nnet::RestoreModel(nnet::ParseCheckpoint(seen[argmin].second));
  CHECK(EvaluateLoss(*model, r.best.stats, valid) == r.history[argmin].valid_loss);
}

TEST_CASE("empty sets and non-finite losses") {
  const auto toy = ToyExamples(8, 1, 10);
  const TrainConfig c = ToyConfig(nnet::ArchKind::kMlp);
  CHECK(ThrownCode([&] { Train(c, {}, toy); }) == Errc::kEmptyManifest);
  CHECK(ThrownCode([&] { Train(c, toy, {}); }) == Errc::kEmptyManifest);
  auto bad = toy;
  bad[0].target(3, 3) = std::nan("");
  CHECK(ThrownCode([&] { Train(c, bad, toy); }) == Errc::kNonFiniteLoss);
}

TEST_CASE("log format") {
  const std::vector<EpochStats> h = {{0, 0.25, 0.5}, {1, 0.125, 0.375}};
  CHECK(FormatLog(h) == "0 0.25 0.5\n1 0.125 0.375\n");
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST_CASE("training from manifests, with a feature cache") {
  TempDir dir("train");
  std::vector<MixtureSpec> specs;
  for (int i = 0; i < 3; ++i) {
    const auto clean = dir / ("c" + std::to_string(i) + ".wav");
    WriteWav(clean, testing::Tone(300.0 + 200.0 * i, 0.2, 4000));
    MixtureSpec s;
    s.clean_path = clean.string();
    s.noise_path = (dir / "n.wav").string();
    s.snr_db = 3.0;
    s.noise_offset = 100 * i;
    specs.push_back(s);
  }
  WriteWav(dir / "n.wav", testing::WhiteNoise(1, 8000, 0.3));
  WriteManifest(dir / "train.jsonl", specs);
  WriteManifest(dir / "valid.jsonl", {specs[0]});
  WriteManifest(dir / "empty.jsonl", {});

  TrainConfig c = ToyConfig(nnet::ArchKind::kMlp);
  c.epochs = 2;
  c.train_manifest = dir / "train.jsonl";
  c.valid_manifest = dir / "valid.jsonl";
  c.out = dir / "model.ckpt";
  c.cache_dir = dir / "cache";
  const TrainResult r = RunTraining(c);
  const auto ckpt = nnet::LoadCheckpoint(c.out);
  CHECK(nnet::SerializeCheckpoint(ckpt) == nnet::SerializeCheckpoint(r.best));
  CHECK(ckpt.frontend == "gt");
  CHECK(Slurp(dir / "model.ckpt.log") == FormatLog(r.history));

  const auto fresh = LoadExamples(specs, FrontendConfig::FromTag("gt"));
  const auto cached = LoadExamples(specs, FrontendConfig::FromTag("gt"), 2, c.cache_dir);
  REQUIRE(std::filesystem::exists(CachePath(c.cache_dir, specs[1], FrontendConfig::FromTag("gt"))));
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(fresh[i].features == cached[i].features);
    CHECK(fresh[i].target == cached[i].target);
    CHECK(fresh[i].features.rows() == static_cast<Eigen::Index>(FrameCount(4000)));
  }
  CHECK(CachePath(c.cache_dir, specs[0], FrontendConfig::FromTag("gt")) !=
        CachePath(c.cache_dir, specs[0], FrontendConfig::FromTag("carfac")));

  c.train_manifest = dir / "empty.jsonl";
  CHECK(ThrownCode([&] { RunTraining(c); }) == Errc::kEmptyManifest);
}

}  // namespace
}  // namespace ears
