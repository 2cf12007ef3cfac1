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

#include "ears/frontends/channel_map.hpp"

#include <cmath>
#include <string>

#include "ears/error.hpp"

namespace ears {

double ErbBandwidth(double f_hz) { return 24.7 * (4.37 * f_hz / 1000.0 + 1.0); }

double ErbRate(double f_hz) { return 21.4 * std::log10(0.00437 * f_hz + 1.0); }

double InverseErbRate(double erb_rate) {
  return (std::pow(10.0, erb_rate / 21.4) - 1.0) / 0.00437;
}

ChannelMap ErbSpace(double f_min, double f_max, int num_channels) {
  if (!(f_min > 0.0) || !(f_max > f_min) || num_channels < 2) {
    throw Error(Errc::kInvalidRange,
                "erb space needs 0 < f_min < f_max and B >= 2 (got " +
                    std::to_string(f_min) + ", " + std::to_string(f_max) + ", " +
                    std::to_string(num_channels) + ")");
  }
  const double lo = ErbRate(f_min);
  const double hi = ErbRate(f_max);
  const double step = (hi - lo) / static_cast<double>(num_channels - 1);
  ChannelMap map;
  map.center_freqs.resize(num_channels);
  map.erb_bandwidths.resize(num_channels);
  for (int k = 0; k < num_channels; ++k) {
    double cf = InverseErbRate(lo + step * k);
    if (k == 0) cf = f_min;
    if (k == num_channels - 1) cf = f_max;
    map.center_freqs[k] = cf;
    map.erb_bandwidths[k] = ErbBandwidth(cf);
  }
  return map;
}

ChannelMap DefaultChannelMap(int sample_rate) {
  return ErbSpace(kDefaultMinCf, sample_rate / 2.0, kDefaultChannels);
}

}  // namespace ears
