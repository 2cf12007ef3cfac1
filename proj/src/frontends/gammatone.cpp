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

#include "ears/frontends/gammatone.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ears/error.hpp"

namespace ears {
namespace {

constexpr int kGainIterations = 100;

double Factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Ratio between the ERB of an order-`order` all-pole gammatone and its
// decay-rate parameter.
double ErbToDecayFactor(int order) {
  const int m = 2 * order - 2;
  const double f = Factorial(order - 1);
  return std::numbers::pi * Factorial(m) * std::pow(2.0, -m) / (f * f);
}

// log of the impulse-response envelope at sample n (up to the norm).
double LogEnvelope(int order, double log_radius, int n) {
  // log C(n + order - 1, order - 1)
  double log_binom = 0.0;
  for (int i = 1; i < order; ++i) {
    log_binom += std::log(static_cast<double>(n + i)) - std::log(static_cast<double>(i));
  }
  return log_binom + n * log_radius;
}

std::complex<double> ImpulseResponseAt(const GammatoneDesign& d, int n) {
  double binom = 1.0;
  for (int i = 1; i < d.order; ++i) binom *= static_cast<double>(n + i) / i;
  return d.norm * binom * std::pow(d.pole, n);
}

}  // namespace

GammatoneDesign DesignGammatone(double cf_hz, double erb_hz, int order,
                                int sample_rate) {
  if (order < 1 || !(erb_hz > 0.0) || !(cf_hz >= 0.0) || sample_rate <= 0) {
    throw Error(Errc::kInvalidParams, "bad gammatone design (cf " +
                                          std::to_string(cf_hz) + " Hz, erb " +
                                          std::to_string(erb_hz) + " Hz)");
  }
  const double decay = erb_hz / ErbToDecayFactor(order);
  const double radius = std::exp(-2.0 * std::numbers::pi * decay / sample_rate);
  const double angle = 2.0 * std::numbers::pi * cf_hz / sample_rate;
  GammatoneDesign d;
  d.pole = std::polar(radius, angle);
  d.norm = 2.0 * std::pow(1.0 - radius, order);
  d.order = order;
  return d;
}

std::vector<std::complex<double>> GammatoneFilter(const GammatoneDesign& design,
                                                  std::span<const double> x) {
  std::vector<std::complex<double>> y(x.size());
  std::vector<std::complex<double>> state(design.order, 0.0);
  const std::complex<double> pole = design.pole;
  for (std::size_t n = 0; n < x.size(); ++n) {
    std::complex<double> v = design.norm * x[n];
    for (auto& s : state) {
      s = v + pole * s;
      v = s;
    }
    y[n] = v;
  }
  return y;
}

std::complex<double> GammatoneResponse(const GammatoneDesign& design, double omega) {
  const std::complex<double> denom =
      1.0 - design.pole * std::polar(1.0, -omega);
  return design.norm / std::pow(denom, design.order);
}

GammatoneFilterbank::GammatoneFilterbank(ChannelMap map, int sample_rate,
                                         int delay_samples)
    : map_(std::move(map)), sample_rate_(sample_rate), delay_(delay_samples) {
  if (map_.size() == 0 || map_.erb_bandwidths.size() != map_.size()) {
    throw Error(Errc::kInvalidRange, "empty or inconsistent channel map");
  }
  if (delay_ < 0) throw Error(Errc::kInvalidParams, "negative design delay");
  for (double cf : map_.center_freqs) {
    if (!(cf > 0.0) || cf > sample_rate_ / 2.0) {
      throw Error(Errc::kInvalidRange,
                  "center frequency " + std::to_string(cf) + " Hz outside (0, fs/2]");
    }
  }

  const std::size_t num = map_.size();
  designs_.reserve(num);
  channel_delays_.resize(num);
  weights_.resize(num);
  std::vector<std::complex<double>> phases(num);
  for (std::size_t k = 0; k < num; ++k) {
    const GammatoneDesign d = DesignGammatone(
        map_.center_freqs[k], map_.erb_bandwidths[k], kGammatoneOrder, sample_rate_);
    designs_.push_back(d);

    const double log_radius = std::log(std::abs(d.pole));
    int peak = 0;
    while (LogEnvelope(d.order, log_radius, peak + 1) >
           LogEnvelope(d.order, log_radius, peak)) {
      ++peak;
    }
    channel_delays_[k] = peak <= delay_ ? delay_ - peak : 0;
    const std::complex<double> at_delay = ImpulseResponseAt(d, delay_ - channel_delays_[k]);
    phases[k] = std::conj(at_delay) / std::abs(at_delay);
  }

  std::vector<double> gains(num, 1.0);
  for (int iter = 0; iter < kGainIterations; ++iter) {
    for (std::size_t k = 0; k < num; ++k) weights_[k] = gains[k] * phases[k];
    std::vector<double> mags(num);
    for (std::size_t k = 0; k < num; ++k) {
      const double omega = 2.0 * std::numbers::pi * map_.center_freqs[k] / sample_rate_;
      mags[k] = std::abs(SystemResponse(omega));
    }
    for (std::size_t k = 0; k < num; ++k) gains[k] /= mags[k];
  }
  for (std::size_t k = 0; k < num; ++k) weights_[k] = gains[k] * phases[k];
}

std::complex<double> GammatoneFilterbank::SystemResponse(double omega) const {
  std::complex<double> total = 0.0;
  for (std::size_t k = 0; k < designs_.size(); ++k) {
    const std::complex<double> pos = GammatoneResponse(designs_[k], omega);
    const std::complex<double> neg = GammatoneResponse(designs_[k], -omega);
    const std::complex<double> real_part =
        0.5 * (weights_[k] * pos + std::conj(weights_[k]) * std::conj(neg));
    total += real_part * std::polar(1.0, -omega * (channel_delays_[k] - delay_));
  }
  return total;
}

ComplexCochleagram GammatoneFilterbank::Analyze(const Waveform& x) const {
  RequireRate(x, sample_rate_);
  ComplexCochleagram out;
  out.sample_rate = sample_rate_;
  out.map = map_;
  out.channels.reserve(designs_.size());
  for (const auto& d : designs_) out.channels.push_back(GammatoneFilter(d, x.samples));
  return out;
}

Resynthesis GammatoneFilterbank::Synthesize(const ComplexCochleagram& c) const {
  if (c.num_channels() != designs_.size()) {
    throw Error(Errc::kShapeMismatch,
                "cochleagram has " + std::to_string(c.num_channels()) +
                    " channels, filterbank has " + std::to_string(designs_.size()));
  }
  const std::size_t n = c.num_samples();
  for (const auto& ch : c.channels) {
    if (ch.size() != n) throw Error(Errc::kShapeMismatch, "ragged cochleagram");
  }
  Resynthesis out;
  out.delay_samples = delay_;
  out.signal.sample_rate = sample_rate_;
  out.signal.samples.assign(n + static_cast<std::size_t>(delay_), 0.0);
  auto& y = out.signal.samples;
  for (std::size_t k = 0; k < designs_.size(); ++k) {
    const std::complex<double> w = weights_[k];
    const auto shift = static_cast<std::size_t>(channel_delays_[k]);
    const auto& ch = c.channels[k];
    for (std::size_t i = 0; i < n; ++i) {
      y[i + shift] += w.real() * ch[i].real() - w.imag() * ch[i].imag();
    }
  }
  return out;
}

ComplexCochleagram GtAnalyze(const Waveform& x, const ChannelMap& map) {
  RequireRate(x);
  return GammatoneFilterbank(map, x.sample_rate).Analyze(x);
}

Resynthesis GtSynthesize(const ComplexCochleagram& c, const ChannelMap& map) {
  if (c.sample_rate != kPipelineRate) {
    throw Error(Errc::kRateMismatch, "cochleagram is not at the pipeline rate");
  }
  return GammatoneFilterbank(map, c.sample_rate).Synthesize(c);
}

}  // namespace ears
