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

#include "ears/frontends/carfac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ears/error.hpp"

namespace ears {

double Carfac::StageGain(const CarfacStage& s, double r) {
  const double a = s.cos_theta;
  const double c = s.sin_theta;
  const double den = 1.0 - 2.0 * r * a + r * r;
  return den / (den + s.zero_coeff * r * c);
}

Carfac::Carfac(const CarfacParams& params, int sample_rate)
    : params_(params), sample_rate_(sample_rate) {
  const auto& p = params_;
  if (p.num_channels < 2 || !(p.min_pole_hz > 0.0) || !(p.max_pole_hz > p.min_pole_hz) ||
      p.max_pole_hz >= sample_rate / 2.0) {
    throw Error(Errc::kInvalidParams, "carfac pole range must satisfy 0 < min < max < fs/2");
  }
  if (!(p.zero_ratio > 1.0)) throw Error(Errc::kInvalidParams, "zero_ratio must exceed 1");
  if (!(p.min_damping > 0.0) || !(p.max_damping >= p.min_damping)) {
    throw Error(Errc::kInvalidParams, "need 0 < min_damping <= max_damping");
  }
  if (!(p.agc_time_constant > 0.0) || p.agc_spatial_width < 0 || !(p.agc_loop_gain >= 0.0)) {
    throw Error(Errc::kInvalidParams, "bad agc settings");
  }

  map_ = ErbSpace(p.min_pole_hz, p.max_pole_hz, p.num_channels);
  stages_.resize(p.num_channels);
  for (int k = 0; k < p.num_channels; ++k) {
    // Stage 0 sits at the base.
    const double hz = map_.center_freqs[p.num_channels - 1 - k];
    CarfacStage& s = stages_[k];
    s.pole_theta = 2.0 * std::numbers::pi * hz / sample_rate;
    s.cos_theta = std::cos(s.pole_theta);
    s.sin_theta = std::sin(s.pole_theta);
    s.zero_coeff = (p.zero_ratio * p.zero_ratio - 1.0) * s.sin_theta;
    s.min_damping = p.min_damping;
    s.max_damping = p.max_damping;
    for (double damping : {s.min_damping, s.max_damping}) {
      const double r = 1.0 - damping * s.pole_theta;
      if (!(r > 0.0 && r < 1.0)) {
        throw Error(Errc::kInstability,
                    "stage " + std::to_string(k) + " pole radius " + std::to_string(r) +
                        " outside (0, 1)");
      }
    }
    s.stage_gain = StageGain(s, 1.0 - s.min_damping * s.pole_theta);
  }
}

RealCochleagram Carfac::Run(const Waveform& x, CarfacDiagnostics* diag) const {
  RequireRate(x, sample_rate_);
  const std::size_t num = stages_.size();
  const std::size_t n = x.size();
  const int width = params_.agc_spatial_width;
  const double smooth = 1.0 - std::exp(-1.0 / (params_.agc_time_constant * sample_rate_));

  std::vector<double> z1(num, 0.0), z2(num, 0.0), detector(num, 0.0), spread(num, 0.0);
  std::vector<double> radius(num);
  std::vector<std::vector<double>> taps(num, std::vector<double>(n));
  for (std::size_t k = 0; k < num; ++k) radius[k] = 1.0 - stages_[k].min_damping * stages_[k].pole_theta;

  double r_min = 1.0, r_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double input = x.samples[i];
    for (std::size_t k = 0; k < num; ++k) {
      const CarfacStage& s = stages_[k];
      const double r = radius[k];
      const double g = StageGain(s, r);
      // Coupled-form rotation by theta with radius r; the input enters z1.
      // y = g * (x + h * z2) puts a zero pair at radius r above the poles.
      const double next_z1 = r * (s.cos_theta * z1[k] - s.sin_theta * z2[k]) + input;
      const double next_z2 = r * (s.sin_theta * z1[k] + s.cos_theta * z2[k]);
      z1[k] = next_z1;
      z2[k] = next_z2;
      const double y = g * (input + s.zero_coeff * next_z2);
      taps[k][i] = y;
      detector[k] += smooth * (std::max(y, 0.0) - detector[k]);
      input = y;
    }

    for (std::size_t k = 0; k < num; ++k) {
      double acc = 0.0;
      for (int d = -width; d <= width; ++d) {
        const auto j = static_cast<std::size_t>(
            std::clamp<long>(static_cast<long>(k) + d, 0, static_cast<long>(num) - 1));
        acc += detector[j];
      }
      spread[k] = acc / (2 * width + 1);
    }
    for (std::size_t k = 0; k < num; ++k) {
      const CarfacStage& s = stages_[k];
      const double undamping = 1.0 / (1.0 + params_.agc_loop_gain * spread[k]);
      const double damping = s.max_damping - (s.max_damping - s.min_damping) * undamping;
      const double r = 1.0 - damping * s.pole_theta;
      if (!(r > 0.0 && r < 1.0)) {
        throw Error(Errc::kInstability, "pole radius left (0, 1) at sample " + std::to_string(i));
      }
      radius[k] = r;
      r_min = std::min(r_min, r);
      r_max = std::max(r_max, r);
    }
  }
  if (diag != nullptr) {
    diag->min_pole_radius = r_min;
    diag->max_pole_radius = r_max;
  }

  RealCochleagram out;
  out.sample_rate = sample_rate_;
  out.map = map_;
  out.channels.resize(num);
  for (std::size_t k = 0; k < num; ++k) out.channels[num - 1 - k] = std::move(taps[k]);
  return out;
}

RealCochleagram CarfacAnalyze(const Waveform& x, const CarfacParams& p,
                              CarfacDiagnostics* diag) {
  RequireRate(x);
  return Carfac(p, x.sample_rate).Run(x, diag);
}

}  // namespace ears
