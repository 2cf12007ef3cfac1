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

#ifndef EARS_FRONTENDS_DRNL_HPP_
#define EARS_FRONTENDS_DRNL_HPP_

#include <vector>

#include "ears/frontends/channel_map.hpp"
#include "ears/waveform.hpp"

namespace ears {

// y = sign(x) * min(a|x|, b|x|^c)
double BrokenStick(double x, double a, double b, double c);

struct DrnlChannelParams {
  // Linear path: gain -> gammatone -> lowpass.
  double lin_gain = 1.0;
  double lin_cf = 1000.0;
  double lin_bw = 100.0;
  int lin_gt_order = 2;
  double lin_lp_cutoff = 1000.0;
  int lin_lp_order = 4;
  // Nonlinear path: gammatone -> broken stick -> gammatone -> lowpass.
  double nl_cf = 1000.0;
  double nl_bw = 100.0;
  double nl_a = 1.0;
  double nl_b = 1.0;
  double nl_c = 0.25;
  int gt_order = 3;
  double lp_cutoff = 1000.0;
  int lp_order = 3;
};

// log10(value) = p0 + m * log10(best frequency)
struct DrnlRegressionLine {
  double p0 = 0.0;
  double m = 0.0;

  double At(double bf_hz) const;
};

// Default regression table for human DRNL filters (Lopez-Poveda & Meddis
// 2001, fits over 250-8000 Hz; extrapolated outside that range).
struct DrnlRegression {
  DrnlRegressionLine lin_cf{-0.067, 1.016};
  DrnlRegressionLine lin_bw{0.037, 0.785};
  DrnlRegressionLine lin_gain{4.20, -0.48};
  DrnlRegressionLine lin_lp{-0.067, 1.016};
  DrnlRegressionLine nl_cf{-0.052, 1.016};
  DrnlRegressionLine nl_bw{-0.031, 0.774};
  DrnlRegressionLine nl_a{1.402, 0.819};
  DrnlRegressionLine nl_b{1.619, -0.818};
  double nl_c = 0.25;
  DrnlRegressionLine nl_lp{-0.052, 1.016};
  int lin_gt_order = 2;
  int lin_lp_order = 4;
  int gt_order = 3;
  int lp_order = 3;
};

struct DrnlParams {
  // Digital full scale to stapes velocity (m/s). Stands in for the outer and
  // middle ear: 1.0 maps to roughly 100 dB SPL peak.
  double input_scale = 3e-4;
  std::vector<DrnlChannelParams> channels;
};

// One channel per entry of `map`; filter frequencies are capped just below
// Nyquist.
DrnlParams DefaultDrnlParams(const ChannelMap& map, int sample_rate = kPipelineRate,
                             const DrnlRegression& table = {});

// Throws Errc::kInvalidParams.
void ValidateDrnlParams(const DrnlParams& p, int sample_rate);

// Real output per channel: linear path + nonlinear path.
RealCochleagram DrnlAnalyze(const Waveform& x, const ChannelMap& map,
                            const DrnlParams& p);

}  // namespace ears

#endif  // EARS_FRONTENDS_DRNL_HPP_
