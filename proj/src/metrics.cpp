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

#include "ears/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "ears/error.hpp"

namespace ears {
namespace {

void RequireSameLength(const Waveform& a, const Waveform& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::kLengthMismatch, "signal lengths differ: " + std::to_string(a.size()) +
                                           " vs " + std::to_string(b.size()));
  }
}

// Start offsets of full frames; one frame when the signal is shorter.
std::vector<std::size_t> FrameStarts(std::size_t n) {
  std::vector<std::size_t> starts;
  if (n == 0) return starts;
  if (n < static_cast<std::size_t>(kMetricFrameLength)) return {0};
  for (std::size_t s = 0; s + kMetricFrameLength <= n; s += kMetricFrameShift) starts.push_back(s);
  return starts;
}

const std::vector<double>& Hamming() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kMetricFrameLength);
    for (int i = 0; i < kMetricFrameLength; ++i) {
      v[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (kMetricFrameLength - 1));
    }
    return v;
  }();
  return w;
}

}  // namespace

double SegSnr(const Waveform& ref, const Waveform& test) {
  RequireSameLength(ref, test);
  const std::size_t n = ref.size();
  double sum = 0.0;
  int count = 0;
  for (std::size_t s : FrameStarts(n)) {
    const std::size_t e = std::min(n, s + kMetricFrameLength);
    double sig = 0.0;
    double err = 0.0;
    for (std::size_t i = s; i < e; ++i) {
      const double d = ref.samples[i] - test.samples[i];
      sig += ref.samples[i] * ref.samples[i];
      err += d * d;
    }
    if (sig <= kSegSnrSilence) continue;
    const double snr = err == 0.0 ? kSegSnrMax : 10.0 * std::log10(sig / err);
    sum += std::clamp(snr, kSegSnrMin, kSegSnrMax);
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

std::vector<double> Autocorrelation(std::span<const double> frame, int order) {
  std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    for (std::size_t i = static_cast<std::size_t>(k); i < frame.size(); ++i) {
      r[k] += frame[i] * frame[i - k];
    }
  }
  return r;
}

Lpc LevinsonDurbin(std::span<const double> r, int order) {
  if (order < 1 || r.size() < static_cast<std::size_t>(order) + 1) {
    throw Error(Errc::kInvalidParams, "autocorrelation shorter than the LPC order");
  }
  Lpc out;
  out.a.assign(static_cast<std::size_t>(order) + 1, 0.0);
  out.a[0] = 1.0;
  double err = r[0];
  if (!(err > 0.0)) return out;
  std::vector<double> prev(out.a);
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc += prev[j] * r[i - j];
    const double k = -acc / err;
    out.a[i] = k;
    for (int j = 1; j < i; ++j) out.a[j] = prev[j] + k * prev[i - j];
    err *= (1.0 - k * k);
    if (!(err > 0.0)) {
      // Perfectly predictable frame; keep the model found so far.
      err = 0.0;
      prev = out.a;
      break;
    }
    prev = out.a;
  }
  out.error = err;
  return out;
}

std::vector<double> LpcToCepstrum(std::span<const double> a, int count) {
  const int p = static_cast<int>(a.size()) - 1;
  std::vector<double> c(static_cast<std::size_t>(count) + 1, 0.0);
  for (int k = 1; k <= count; ++k) {
    double acc = k <= p ? -a[k] : 0.0;
    for (int m = std::max(1, k - p); m < k; ++m) {
      acc -= (static_cast<double>(m) / k) * c[m] * a[k - m];
    }
    c[k] = acc;
  }
  return {c.begin() + 1, c.end()};
}

std::vector<double> LpcCepstra(std::span<const double> frame, int order) {
  const Lpc lpc = LevinsonDurbin(Autocorrelation(frame, order), order);
  return LpcToCepstrum(lpc.a, order);
}

double CepstralFrameDistance(std::span<const double> c_ref, std::span<const double> c_test) {
  if (c_ref.size() != c_test.size()) throw Error(Errc::kLengthMismatch, "cepstrum orders differ");
  double sq = 0.0;
  for (std::size_t k = 0; k < c_ref.size(); ++k) {
    const double d = c_ref[k] - c_test[k];
    sq += d * d;
  }
  return std::clamp(10.0 / std::numbers::ln10 * std::sqrt(2.0 * sq), 0.0, kCdMax);
}

double CepstralDistance(const Waveform& ref, const Waveform& test) {
  RequireSameLength(ref, test);
  const std::size_t n = ref.size();
  const auto& w = Hamming();
  struct FrameCd {
    double energy;
    double cd;
  };
  std::vector<FrameCd> frames;
  std::vector<double> fr(kMetricFrameLength), ft(kMetricFrameLength);
  for (std::size_t s : FrameStarts(n)) {
    double energy = 0.0;
    for (int i = 0; i < kMetricFrameLength; ++i) {
      const std::size_t j = s + static_cast<std::size_t>(i);
      const double xr = j < n ? ref.samples[j] : 0.0;
      const double xt = j < n ? test.samples[j] : 0.0;
      energy += xr * xr;
      fr[i] = xr * w[i];
      ft[i] = xt * w[i];
    }
    frames.push_back({energy, CepstralFrameDistance(LpcCepstra(fr), LpcCepstra(ft))});
  }
  double loudest = 0.0;
  for (const auto& f : frames) loudest = std::max(loudest, f.energy);
  const double floor = std::max(1e-10, loudest * std::pow(10.0, -kCdActivityRangeDb / 10.0));
  double sum = 0.0;
  int count = 0;
  for (const auto& f : frames) {
    if (f.energy > floor) {
      sum += f.cd;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

DeltaReport ComputeDeltaReport(const Waveform& clean, const Waveform& noisy,
                               const Waveform& enhanced) {
  RequireSameLength(clean, noisy);
  RequireSameLength(clean, enhanced);
  DeltaReport r;
  r.segsnr_noisy = SegSnr(clean, noisy);
  r.segsnr_enh = SegSnr(clean, enhanced);
  r.cd_noisy = CepstralDistance(clean, noisy);
  r.cd_enh = CepstralDistance(clean, enhanced);
  r.delta_segsnr = r.segsnr_enh - r.segsnr_noisy;
  r.delta_cd = r.cd_noisy - r.cd_enh;
  return r;
}

std::string ReportJson(const ReportContext& ctx, const DeltaReport& r) {
  nlohmann::ordered_json j;
  j["file"] = ctx.file;
  j["snr_condition"] = ctx.snr_condition;
  j["noise_type"] = ctx.noise_type;
  j["frontend"] = ctx.frontend;
  j["arch"] = ctx.arch;
  j["segsnr_noisy"] = r.segsnr_noisy;
  j["segsnr_enh"] = r.segsnr_enh;
  j["cd_noisy"] = r.cd_noisy;
  j["cd_enh"] = r.cd_enh;
  j["delta_segsnr"] = r.delta_segsnr;
  j["delta_cd"] = r.delta_cd;
  j["pesq"] = nullptr;
  return j.dump();
}

}  // namespace ears
