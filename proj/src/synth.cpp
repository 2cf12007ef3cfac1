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

#include "ears/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ears/metrics.hpp"
#include "ears/wav_io.hpp"

namespace ears::synth {
namespace {

namespace fs = std::filesystem;
constexpr double kFs = kPipelineRate;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLevel = 0.05;

struct Formants {
  double f1, f2, f3;
};

constexpr std::array<Formants, 7> kVowels = {{
    {270, 2290, 3010},
    {530, 1840, 2480},
    {730, 1090, 2440},
    {570, 840, 2410},
    {300, 870, 2240},
    {490, 1350, 1690},
    {660, 1720, 2410},
}};
constexpr std::array<double, 3> kFormantBw = {70.0, 100.0, 140.0};

// Two-pole resonator, unit gain at DC, coefficients refreshed per sample.
struct Resonator {
  double y1 = 0.0, y2 = 0.0;
  double Step(double x, double freq, double bw) {
    freq = std::min(freq, 0.45 * kFs);
    const double r = std::exp(-std::numbers::pi * bw / kFs);
    const double a1 = 2.0 * r * std::cos(kTwoPi * freq / kFs);
    const double a2 = -r * r;
    const double y = (1.0 - a1 - a2) * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

void NormalizeRms(std::vector<double>& x, double target) {
  const double r = Rms(x);
  if (r <= 0.0) return;
  for (double& v : x) v *= target / r;
}

std::size_t Samples(double seconds) {
  return static_cast<std::size_t>(std::llround(std::max(0.0, seconds) * kFs));
}

}  // namespace

Voice RandomVoice(Rng& rng) {
  Voice v;
  const bool high = rng.Uniform() < 0.5;
  v.f0 = high ? rng.Uniform(170.0, 250.0) : rng.Uniform(85.0, 140.0);
  v.formant_scale = high ? rng.Uniform(1.08, 1.2) : rng.Uniform(0.92, 1.04);
  v.rate = rng.Uniform(0.8, 1.25);
  return v;
}

Waveform Speech(Rng& rng, const Voice& voice, double seconds, bool pauses) {
  const std::size_t n = Samples(seconds);
  std::vector<double> voiced(n, 0.0), fric(n, 0.0), f0(n, voice.f0), fric_cf(n, 4000.0);
  std::vector<Formants> formant(n, kVowels[2]);

  std::size_t t = 0;
  Formants prev = kVowels[rng.Below(kVowels.size())];
  while (t < n) {
    if (pauses && t > 0 && rng.Uniform() < 0.15) {
      t += Samples(rng.Uniform(0.08, 0.25));
      continue;
    }
    if (rng.Uniform() < 0.4) {
      const std::size_t len = Samples(rng.Uniform(0.04, 0.09));
      const double cf = rng.Uniform(2500.0, 6000.0);
      const double amp = rng.Uniform(0.03, 0.1);
      for (std::size_t i = 0; i < len && t + i < n; ++i) {
        const double w = std::sin(std::numbers::pi * (i + 0.5) / len);
        fric[t + i] = amp * w;
        fric_cf[t + i] = cf;
      }
      t += len;
    }
    const std::size_t len = Samples(rng.Uniform(0.14, 0.32) / voice.rate);
    const Formants next = kVowels[rng.Below(kVowels.size())];
    const double amp = rng.Uniform(0.5, 1.0);
    const double f0_start = voice.f0 * rng.Uniform(0.9, 1.15);
    const double f0_end = f0_start * rng.Uniform(0.8, 1.05);
    for (std::size_t i = 0; i < len && t + i < n; ++i) {
      const double u = (i + 0.5) / static_cast<double>(len);
      const double w = std::pow(std::sin(std::numbers::pi * u), 0.6);
      voiced[t + i] = amp * w;
      f0[t + i] = f0_start + (f0_end - f0_start) * u;
      const double s = voice.formant_scale;
      formant[t + i] = {s * (prev.f1 + (next.f1 - prev.f1) * u), s * (prev.f2 + (next.f2 - prev.f2) * u),
                        s * (prev.f3 + (next.f3 - prev.f3) * u)};
    }
    prev = next;
    t += len;
  }

  Waveform out;
  out.samples.resize(n);
  double phase = 0.0;
  double lp1 = 0.0, lp2 = 0.0, last = 0.0, noise_prev = 0.0;
  std::array<Resonator, 3> tract{};
  Resonator fric_res;
  for (std::size_t i = 0; i < n; ++i) {
    const double jitter = 1.0 + 0.01 * rng.Normal();
    phase += f0[i] * jitter / kFs;
    double pulse = 0.0;
    if (phase >= 1.0) {
      phase -= std::floor(phase);
      pulse = 1.0;
    }
    // Glottal shaping: two leaky integrators, then lip radiation.
    lp1 = 0.97 * lp1 + pulse;
    lp2 = 0.97 * lp2 + lp1;
    const double glottal = lp2 - last;
    last = lp2;
    double src = voiced[i] * (glottal + 0.02 * rng.Normal());
    src = tract[0].Step(src, formant[i].f1, kFormantBw[0]);
    src = tract[1].Step(src, formant[i].f2, kFormantBw[1]);
    src = tract[2].Step(src, formant[i].f3, kFormantBw[2]);
    const double white = rng.Normal();
    const double hp = white - noise_prev;
    noise_prev = white;
    out.samples[i] = src + fric[i] * fric_res.Step(hp, fric_cf[i], 1500.0);
  }
  NormalizeRms(out.samples, kLevel);
  return out;
}

Waveform Babble(Rng& rng, double seconds, int talkers) {
  Waveform out;
  out.samples.assign(Samples(seconds), 0.0);
  for (int k = 0; k < talkers; ++k) {
    const Voice v = RandomVoice(rng);
    const Waveform s = Speech(rng, v, seconds, true);
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += s.samples[i];
  }
  NormalizeRms(out.samples, kLevel);
  return out;
}

Waveform SpeechShapedNoise(Rng& rng, double seconds) {
  const Waveform ref = Babble(rng, 20.0, 8);
  constexpr int kOrder = 16;
  const Lpc lpc = LevinsonDurbin(Autocorrelation(ref.samples, kOrder), kOrder);
  Waveform out;
  out.samples.resize(Samples(seconds));
  std::array<double, kOrder + 1> hist{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    double y = rng.Normal();
    for (int k = 1; k <= kOrder; ++k) y -= lpc.a[k] * hist[k - 1];
    for (int k = kOrder; k > 0; --k) hist[k] = hist[k - 1];
    hist[0] = y;
    out.samples[i] = y;
  }
  NormalizeRms(out.samples, kLevel);
  return out;
}

Waveform FactoryNoise(Rng& rng, double seconds) {
  const std::size_t n = Samples(seconds);
  Waveform out;
  out.samples.assign(n, 0.0);
  double rumble = 0.0;
  const double whine = rng.Uniform(900.0, 1600.0);
  const double hum = rng.Uniform(48.0, 62.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kFs;
    rumble = 0.985 * rumble + 0.1 * rng.Normal();
    const double machine = 0.3 * std::sin(kTwoPi * hum * t) + 0.2 * std::sin(kTwoPi * 2 * hum * t) +
                           0.1 * std::sin(kTwoPi * 3 * hum * t);
    const double am = 0.6 + 0.4 * std::sin(kTwoPi * 4.0 * t);
    out.samples[i] = rumble + 0.25 * rng.Normal() + machine + 0.08 * am * std::sin(kTwoPi * whine * t);
  }
  // Impacts: decaying resonances with a noisy attack.
  std::size_t next = Samples(rng.Uniform(0.05, 0.4));
  while (next < n) {
    const double f = rng.Uniform(1000.0, 4000.0);
    const double tau = rng.Uniform(0.01, 0.04);
    const double amp = rng.Uniform(2.0, 5.0);
    const std::size_t len = Samples(6.0 * tau);
    for (std::size_t i = 0; i < len && next + i < n; ++i) {
      const double t = static_cast<double>(i) / kFs;
      const double env = amp * std::exp(-t / tau);
      out.samples[next + i] += env * (std::sin(kTwoPi * f * t) + 0.5 * rng.Normal());
    }
    next += Samples(rng.Uniform(0.25, 0.8));
  }
  NormalizeRms(out.samples, kLevel);
  return out;
}

std::vector<fs::path> WriteCorpus(const fs::path& root, const CorpusLayout& layout) {
  std::vector<fs::path> written;
  const auto write = [&](const fs::path& p, const Waveform& w) {
    fs::create_directories(p.parent_path());
    WriteWav(p, w);
    written.push_back(p);
  };
  const std::array<std::pair<const char*, int>, 3> splits = {
      {{"train", layout.train}, {"valid", layout.valid}, {"test", layout.test}}};
  for (const auto& [split, count] : splits) {
    for (int i = 0; i < count; ++i) {
      Rng rng(DeriveSeed(layout.seed, split, static_cast<std::uint64_t>(i)));
      const Voice v = RandomVoice(rng);
      Waveform w = Speech(rng, v, rng.Uniform(layout.min_seconds, layout.max_seconds));
      double peak = 0.0;
      for (double s : w.samples) peak = std::max(peak, std::abs(s));
      const double level = std::min(rng.Uniform(0.5, 2.0), peak > 0.0 ? 0.9 / peak : 1.0);
      for (double& s : w.samples) s *= level;
      char name[32];
      std::snprintf(name, sizeof(name), "utt_%03d.wav", i);
      write(root / "clean" / split / name, w);
    }
  }
  Rng babble(DeriveSeed(layout.seed, "babble", 0));
  write(root / "noise" / "babble.wav", Babble(babble, layout.noise_seconds));
  Rng ssn(DeriveSeed(layout.seed, "ssn", 0));
  write(root / "noise" / "ssn.wav", SpeechShapedNoise(ssn, layout.noise_seconds));
  Rng factory(DeriveSeed(layout.seed, "factory", 0));
  write(root / "noise" / "factory.wav", FactoryNoise(factory, layout.noise_seconds));
  return written;
}

}  // namespace ears::synth
