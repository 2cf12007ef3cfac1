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

#ifndef EARS_FRONTENDS_CARFAC_HPP_
#define EARS_FRONTENDS_CARFAC_HPP_

#include <vector>

#include "ears/frontends/channel_map.hpp"
#include "ears/waveform.hpp"

namespace ears {

struct CarfacParams {
  int num_channels = kDefaultChannels;
  // Pole frequencies are ERB-rate spaced between these (stage 0 at the top).
  double min_pole_hz = kDefaultMinCf;
  double max_pole_hz = 6800.0;
  // Zero frequency relative to the pole frequency.
  double zero_ratio = 1.4142135623730951;
  // Pole radius r = 1 - damping * theta.
  double min_damping = 0.10;
  double max_damping = 0.35;
  // Detector smoothing (seconds).
  double agc_time_constant = 0.004;
  // Neighbor stages on each side averaged into each detector value.
  int agc_spatial_width = 1;
  double agc_loop_gain = 1.0;
};

// Per-stage coefficients, ordered base (high cf) to apex (low cf).
struct CarfacStage {
  double pole_theta = 0.0;  // radians/sample
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double zero_coeff = 0.0;  // h: places the zero pair above the pole pair
  double min_damping = 0.0;
  double max_damping = 0.0;
  double stage_gain = 1.0;  // DC-normalizing gain at min damping
};

struct CarfacDiagnostics {
  double min_pole_radius = 1.0;
  double max_pole_radius = 0.0;
};

// Cascade of two-pole/two-zero resonators in coupled form. Each stage feeds
// the next; a half-wave rectified, smoothed, spatially averaged detector
// moves each stage's damping between its limits on every sample.
class Carfac {
 public:
  // Throws Errc::kInstability if any stage could reach r >= 1 (or r <= 0),
  // Errc::kInvalidParams for other bad settings.
  explicit Carfac(const CarfacParams& params, int sample_rate = kPipelineRate);

  // Channels in the result are re-ordered to ascending center frequency.
  RealCochleagram Run(const Waveform& x, CarfacDiagnostics* diag = nullptr) const;

  const std::vector<CarfacStage>& stages() const { return stages_; }
  // Ascending-cf map of the stage pole frequencies.
  const ChannelMap& map() const { return map_; }
  const CarfacParams& params() const { return params_; }

  // DC-normalizing stage gain for pole radius r.
  static double StageGain(const CarfacStage& s, double r);

 private:
  CarfacParams params_;
  int sample_rate_;
  std::vector<CarfacStage> stages_;
  ChannelMap map_;
};

RealCochleagram CarfacAnalyze(const Waveform& x, const CarfacParams& p,
                              CarfacDiagnostics* diag = nullptr);

}  // namespace ears

#endif  // EARS_FRONTENDS_CARFAC_HPP_
