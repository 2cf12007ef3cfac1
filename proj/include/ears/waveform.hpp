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

#ifndef EARS_WAVEFORM_HPP_
#define EARS_WAVEFORM_HPP_

#include <cstddef>
#include <vector>

namespace ears {

// Every pipeline entry point runs at this rate; nothing is resampled.
inline constexpr int kPipelineRate = 16000;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kPipelineRate;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// Throws Errc::kRateMismatch when the waveform is not at `rate`.
void RequireRate(const Waveform& x, int rate = kPipelineRate);

// Throws Errc::kInvalidParams on NaN/Inf samples.
void RequireFinite(const Waveform& x);

double Rms(const std::vector<double>& x);

}  // namespace ears

#endif  // EARS_WAVEFORM_HPP_
