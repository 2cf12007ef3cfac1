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

#include "ears/waveform.hpp"

#include <cmath>
#include <string>

#include "ears/error.hpp"

namespace ears {

void RequireRate(const Waveform& x, int rate) {
  if (x.sample_rate != rate) {
    throw Error(Errc::kRateMismatch,
                "expected " + std::to_string(rate) + " Hz, got " +
                    std::to_string(x.sample_rate) + " Hz");
  }
}

void RequireFinite(const Waveform& x) {
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    if (!std::isfinite(x.samples[i])) {
      throw Error(Errc::kInvalidParams,
                  "non-finite sample at index " + std::to_string(i));
    }
  }
}

double Rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace ears
