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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "ears/frontends/gammatone.hpp"
#include "ears/metrics.hpp"
#include "ears/mixer.hpp"
#include "ears/nnet/checkpoint.hpp"
#include "ears/nnet/models.hpp"
#include "ears/pipeline.hpp"
#include "ears/synth.hpp"
#include "test_signals.hpp"

namespace ears {
namespace {

using Catch::Approx;
using testing::ThrownCode;

Mask ConstantMask(std::size_t samples, double value) {
  Mask m;
  m.values = Matrix::Constant(kDefaultChannels, static_cast<Eigen::Index>(FrameCount(samples)), value);
  return m;
}

nnet::Checkpoint RandomCheckpoint(const std::string& arch, std::uint64_t seed) {
  Rng rng(seed);
  auto model = nnet::CreateModel(nnet::ArchSpec::Parse(arch), rng);
  NormStats stats{Vector::Zero(128), Vector::Constant(128, 5.0)};
  return nnet::MakeCheckpoint(*model, "gt", stats);
}

TEST_CASE("gain interpolation") {
  RowVector f(3);
  f << 0.0, 1.0, 0.5;
  const auto g = InterpolateGains(f, 700);
  CHECK(g[0] == 0.0);
  CHECK(g[159] == 0.0);  // first centre at 159.5
  CHECK(g[160] == Approx(0.5 / 160.0));
  CHECK(g[239] == Approx(0.5).margin(1e-2));
  CHECK(g[320] == Approx(1.0 - 0.5 * 0.5 / 160.0));
  CHECK(g[480] == 0.5);
  CHECK(g[699] == 0.5);
  CHECK(InterpolateGains(RowVector(0), 5) == std::vector<double>(5, 0.0));
}

TEST_CASE("a unit mask is the plain round trip") {
  const Waveform x = testing::BandNoise(1, 16000, 100.0, 7000.0);
  const Waveform y = EnhanceWithMask(x, ConstantMask(x.size(), 1.0));
  REQUIRE(y.size() == x.size());

  const GammatoneFilterbank bank(DefaultChannelMap(kPipelineRate));
  Waveform padded = x;
  padded.samples.resize(x.size() + bank.delay(), 0.0);
  const Resynthesis r = bank.Synthesize(bank.Analyze(padded));
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(y.samples[i] - r.signal.samples[i + bank.delay()]));
  }
  CHECK(worst < 1e-12);
  CHECK(testing::SnrDb(x.samples, y.samples, 800, 15200) >= 20.0);
}

TEST_CASE("zero mask and silence") {
  const Waveform x = testing::WhiteNoise(2, 8000, 0.5);
  const Waveform y = EnhanceWithMask(x, ConstantMask(x.size(), 0.0));
  CHECK(*std::max_element(y.samples.begin(), y.samples.end()) == 0.0);
  CHECK(*std::min_element(y.samples.begin(), y.samples.end()) == 0.0);

  Waveform silent;
  silent.samples.assign(8000, 0.0);
  const Waveform s = EnhanceWithMask(silent, ConstantMask(8000, 0.7));
  for (double v : s.samples) REQUIRE(std::abs(v) < 1e-6);
}

TEST_CASE("half mask halves a tone") {
  const Waveform x = testing::Tone(1000.0, 0.3, 16000);
  const Waveform y = EnhanceWithMask(x, ConstantMask(x.size(), 0.5));
  const double ratio = testing::RmsRange(y.samples, 1600, 14400) / testing::RmsRange(x.samples, 1600, 14400);
  CHECK(ratio == Approx(0.5).epsilon(0.01));
}

TEST_CASE("output is aligned with the input") {
  const Waveform x = testing::BandNoise(3, 16000, 100.0, 7000.0);
  const Waveform y = EnhanceWithMask(x, ConstantMask(x.size(), 1.0));
  int best_lag = 0;
  double best = -1.0;
  for (int lag = -20; lag <= 20; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 1000; i < 15000; ++i) acc += x.samples[i] * y.samples[i + lag];
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  CHECK(std::abs(best_lag) <= 1);
}

TEST_CASE("the oracle mask improves segmental snr at 0 dB") {
  Rng rng(5);
  double delta = 0.0;
  const int count = 3;
  const Waveform ssn = synth::SpeechShapedNoise(rng, 10.0);
  for (int i = 0; i < count; ++i) {
    const Waveform clean = synth::Speech(rng, synth::RandomVoice(rng), 2.0);
    const Mixture m = MixAtSnr(clean, ssn, 0.0, 16000 * i);
    const Waveform enh = EnhanceWithMask(m.noisy, OracleMask(clean, m.noise));
    delta += SegSnr(clean, enh) - SegSnr(clean, m.noisy);
  }
  CHECK(delta / count >= 3.0);
}

TEST_CASE("shape and input errors") {
  const Waveform x = testing::WhiteNoise(4, 1000, 0.1);
  Mask wrong = ConstantMask(x.size(), 1.0);
  wrong.values.conservativeResize(Eigen::NoChange, wrong.values.cols() + 1);
  CHECK(ThrownCode([&] { EnhanceWithMask(x, wrong); }) == Errc::kShapeMismatch);
  Mask rows;
  rows.values = Matrix::Ones(32, static_cast<Eigen::Index>(FrameCount(x.size())));
  CHECK(ThrownCode([&] { EnhanceWithMask(x, rows); }) == Errc::kShapeMismatch);
  CHECK(ThrownCode([&] { OracleMask(x, testing::WhiteNoise(5, 999, 0.1)); }) == Errc::kLengthMismatch);
  Waveform bad = x;
  bad.samples[10] = std::numeric_limits<double>::quiet_NaN();
  CHECK(ThrownCode([&] { EnhanceWithMask(bad, ConstantMask(x.size(), 1.0)); }).has_value());
}

TEST_CASE("enhancer with a trained-shape model") {
  const Waveform x = testing::WhiteNoise(6, 5000, 0.2);
  for (const char* arch : {"mlp:896-16-16-16-64", "lstm:128-8-8-64"}) {
    Enhancer e(RandomCheckpoint(arch, 7));
    const Mask m = e.PredictMask(x);
    CHECK(m.values.rows() == kDefaultChannels);
    CHECK(m.values.cols() == static_cast<Eigen::Index>(FrameCount(x.size())));
    CHECK(m.values.minCoeff() >= 0.0);
    CHECK(m.values.maxCoeff() <= 1.0);
    const Waveform y = e.Run(x);
    CHECK(y.size() == x.size());
    CHECK(std::all_of(y.samples.begin(), y.samples.end(), [](double v) { return std::isfinite(v); }));
  }
}

TEST_CASE("a broken model cannot produce NaN audio") {
  nnet::Checkpoint ckpt = RandomCheckpoint("mlp:896-16-16-16-64", 8);
  for (auto& t : ckpt.tensors) std::fill(t.data.begin(), t.data.end(), std::numeric_limits<float>::quiet_NaN());
  Enhancer e(ckpt);
  const Waveform y = e.Run(testing::WhiteNoise(9, 3000, 0.2));
  for (double v : y.samples) REQUIRE(v == 0.0);
  CHECK(ThrownCode([] { Enhancer e(RandomCheckpoint("mlp:448-16-32", 1)); }) == Errc::kCheckpointCorrupt);
}

}  // namespace
}  // namespace ears
