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

#include "ears/frontends/drnl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "ears/error.hpp"
#include "ears/frontends/gammatone.hpp"

namespace ears {
namespace {

// Keeps every filter strictly inside the band.
constexpr double kMaxFreqFraction = 0.48;

std::vector<double> RealGammatone(double cf, double bw, int order, int fs,
                                  std::span<const double> x) {
  const GammatoneDesign d = DesignGammatone(cf, bw, order, fs);
  const auto y = GammatoneFilter(d, x);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i].real();
  return out;
}

void Lowpass(double cutoff, int order, int fs, std::vector<double>& x) {
  const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff / fs);
  for (int stage = 0; stage < order; ++stage) {
    double state = 0.0;
    for (double& v : x) {
      state += alpha * (v - state);
      v = state;
    }
  }
}

}  // namespace

double BrokenStick(double x, double a, double b, double c) {
  const double mag = std::abs(x);
  const double y = std::min(a * mag, b * std::pow(mag, c));
  return x < 0.0 ? -y : y;
}

double DrnlRegressionLine::At(double bf_hz) const {
  return std::pow(10.0, p0 + m * std::log10(bf_hz));
}

DrnlParams DefaultDrnlParams(const ChannelMap& map, int sample_rate,
                             const DrnlRegression& t) {
  const double cap = kMaxFreqFraction * sample_rate;
  DrnlParams p;
  p.channels.reserve(map.size());
  for (double bf : map.center_freqs) {
    DrnlChannelParams ch;
    ch.lin_cf = std::min(t.lin_cf.At(bf), cap);
    ch.lin_bw = t.lin_bw.At(bf);
    ch.lin_gain = t.lin_gain.At(bf);
    ch.lin_gt_order = t.lin_gt_order;
    ch.lin_lp_cutoff = std::min(t.lin_lp.At(bf), cap);
    ch.lin_lp_order = t.lin_lp_order;
    ch.nl_cf = std::min(t.nl_cf.At(bf), cap);
    ch.nl_bw = t.nl_bw.At(bf);
    ch.nl_a = t.nl_a.At(bf);
    ch.nl_b = t.nl_b.At(bf);
    ch.nl_c = t.nl_c;
    ch.gt_order = t.gt_order;
    ch.lp_cutoff = std::min(t.nl_lp.At(bf), cap);
    ch.lp_order = t.lp_order;
    p.channels.push_back(ch);
  }
  return p;
}

void ValidateDrnlParams(const DrnlParams& p, int sample_rate) {
  if (!(p.input_scale > 0.0)) throw Error(Errc::kInvalidParams, "input_scale must be > 0");
  const double nyquist = sample_rate / 2.0;
  for (std::size_t k = 0; k < p.channels.size(); ++k) {
    const auto& c = p.channels[k];
    const auto fail = [k](const std::string& what) {
      return Error(Errc::kInvalidParams, "drnl channel " + std::to_string(k) + ": " + what);
    };
    if (!(c.nl_c > 0.0 && c.nl_c <= 1.0)) throw fail("nl_c outside (0, 1]");
    if (!(c.lin_gain > 0.0) || !(c.nl_a > 0.0) || !(c.nl_b >= 0.0)) {
      throw fail("gains must be positive");
    }
    if (c.lin_gt_order < 1 || c.gt_order < 1 || c.lin_lp_order < 0 || c.lp_order < 0) {
      throw fail("bad filter order");
    }
    for (double f : {c.lin_cf, c.nl_cf, c.lin_lp_cutoff, c.lp_cutoff}) {
      if (!(f > 0.0) || f >= nyquist) throw fail("frequency outside (0, fs/2)");
    }
    if (!(c.lin_bw > 0.0) || !(c.nl_bw > 0.0)) throw fail("bandwidth must be positive");
  }
}

RealCochleagram DrnlAnalyze(const Waveform& x, const ChannelMap& map,
                            const DrnlParams& p) {
  RequireRate(x);
  if (p.channels.size() != map.size()) {
    throw Error(Errc::kInvalidParams, "drnl parameter table does not match channel map");
  }
  ValidateDrnlParams(p, x.sample_rate);
  const int fs = x.sample_rate;

  std::vector<double> input(x.samples);
  for (double& v : input) v *= p.input_scale;

  RealCochleagram out;
  out.sample_rate = fs;
  out.map = map;
  out.channels.resize(map.size());
  for (std::size_t k = 0; k < map.size(); ++k) {
    const auto& c = p.channels[k];

    std::vector<double> lin =
        RealGammatone(c.lin_cf, c.lin_bw, c.lin_gt_order, fs, input);
    for (double& v : lin) v *= c.lin_gain;
    Lowpass(c.lin_lp_cutoff, c.lin_lp_order, fs, lin);

    std::vector<double> nl = RealGammatone(c.nl_cf, c.nl_bw, c.gt_order, fs, input);
    for (double& v : nl) v = BrokenStick(v, c.nl_a, c.nl_b, c.nl_c);
    nl = RealGammatone(c.nl_cf, c.nl_bw, c.gt_order, fs, nl);
    Lowpass(c.lp_cutoff, c.lp_order, fs, nl);

    for (std::size_t i = 0; i < lin.size(); ++i) lin[i] += nl[i];
    out.channels[k] = std::move(lin);
  }
  return out;
}

}  // namespace ears
