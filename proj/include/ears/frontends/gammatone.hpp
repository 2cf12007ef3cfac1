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

#ifndef EARS_FRONTENDS_GAMMATONE_HPP_
#define EARS_FRONTENDS_GAMMATONE_HPP_

#include <complex>
#include <span>
#include <vector>

#include "ears/frontends/channel_map.hpp"
#include "ears/waveform.hpp"

namespace ears {

// 4 ms at 16 kHz.
inline constexpr int kGammatoneDesignDelay = 64;
inline constexpr int kGammatoneOrder = 4;

// One channel of an all-pole complex gammatone: `order` identical first-order
// sections y[n] = x[n] + pole * y[n-1], with the input scaled by `norm` so a
// real unit tone at the center frequency produces a complex envelope of 1.
struct GammatoneDesign {
  std::complex<double> pole;
  double norm = 1.0;
  int order = kGammatoneOrder;
};

// `erb_hz` is the equivalent rectangular bandwidth of the whole cascade.
GammatoneDesign DesignGammatone(double cf_hz, double erb_hz, int order,
                                int sample_rate);

// Complex output of one channel.
std::vector<std::complex<double>> GammatoneFilter(const GammatoneDesign& design,
                                                  std::span<const double> x);

// Complex frequency response at `omega` radians/sample.
std::complex<double> GammatoneResponse(const GammatoneDesign& design, double omega);

struct Resynthesis {
  Waveform signal;     // input length + delay_samples
  int delay_samples = 0;
};

// Invertible parallel filterbank. Synthesis delays each channel so its
// impulse-response envelope peaks at the design delay (channels that peak
// later are left undelayed), applies a phase and gain factor, and sums the
// real parts. Gains are refined iteratively so the overall response is flat
// at the center frequencies.
class GammatoneFilterbank {
 public:
  explicit GammatoneFilterbank(ChannelMap map, int sample_rate = kPipelineRate,
                               int delay_samples = kGammatoneDesignDelay);

  ComplexCochleagram Analyze(const Waveform& x) const;
  Resynthesis Synthesize(const ComplexCochleagram& c) const;

  // Overall analysis+synthesis transfer at `omega`, before the delay.
  std::complex<double> SystemResponse(double omega) const;

  const ChannelMap& map() const { return map_; }
  int sample_rate() const { return sample_rate_; }
  int delay() const { return delay_; }
  const std::vector<GammatoneDesign>& designs() const { return designs_; }
  const std::vector<int>& channel_delays() const { return channel_delays_; }
  const std::vector<std::complex<double>>& weights() const { return weights_; }

 private:
  ChannelMap map_;
  int sample_rate_;
  int delay_;
  std::vector<GammatoneDesign> designs_;
  std::vector<int> channel_delays_;
  std::vector<std::complex<double>> weights_;  // phase * gain
};

ComplexCochleagram GtAnalyze(const Waveform& x, const ChannelMap& map);
Resynthesis GtSynthesize(const ComplexCochleagram& c, const ChannelMap& map);

}  // namespace ears

#endif  // EARS_FRONTENDS_GAMMATONE_HPP_
