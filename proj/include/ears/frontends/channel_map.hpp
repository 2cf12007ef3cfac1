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

#ifndef EARS_FRONTENDS_CHANNEL_MAP_HPP_
#define EARS_FRONTENDS_CHANNEL_MAP_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace ears {

inline constexpr int kDefaultChannels = 64;
inline constexpr double kDefaultMinCf = 50.0;

// Glasberg & Moore equivalent rectangular bandwidth, in Hz.
double ErbBandwidth(double f_hz);
// ERB-rate (number of ERBs below f).
double ErbRate(double f_hz);
double InverseErbRate(double erb_rate);

struct ChannelMap {
  std::vector<double> center_freqs;    // Hz, strictly increasing
  std::vector<double> erb_bandwidths;  // Hz

  std::size_t size() const { return center_freqs.size(); }
};

// B center frequencies uniformly spaced on the ERB-rate scale with the
// endpoints pinned to f_min and f_max. Throws Errc::kInvalidRange.
ChannelMap ErbSpace(double f_min, double f_max, int num_channels);

// The default 64-channel map from 50 Hz to Nyquist.
ChannelMap DefaultChannelMap(int sample_rate);

// Channel-major band signals; N equals the input length.
template <typename T>
struct BasicCochleagram {
  std::vector<std::vector<T>> channels;
  int sample_rate = 0;
  ChannelMap map;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_samples() const {
    return channels.empty() ? 0 : channels.front().size();
  }
};

using ComplexCochleagram = BasicCochleagram<std::complex<double>>;
using RealCochleagram = BasicCochleagram<double>;

}  // namespace ears

#endif  // EARS_FRONTENDS_CHANNEL_MAP_HPP_
