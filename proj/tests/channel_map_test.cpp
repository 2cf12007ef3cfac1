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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "ears/frontends/channel_map.hpp"
#include "test_signals.hpp"

namespace ears {
namespace {

using Catch::Approx;
using testing::ThrownCode;

TEST_CASE("Glasberg-Moore formulas") {
  // 24.7 * (4.37 + 1) and 21.4 * log10(5.37).
  CHECK(ErbBandwidth(1000.0) == Approx(132.639).epsilon(1e-12));
  CHECK(ErbRate(1000.0) == Approx(15.621449713970488).epsilon(1e-12));
  CHECK(InverseErbRate(ErbRate(3210.0)) == Approx(3210.0).epsilon(1e-12));
  CHECK(ErbRate(0.0) == 0.0);
}

TEST_CASE("erb_space endpoints and spacing") {
  const ChannelMap m = ErbSpace(50.0, 8000.0, 64);
  REQUIRE(m.size() == 64);
  REQUIRE(m.erb_bandwidths.size() == 64);
  CHECK(m.center_freqs.front() == 50.0);
  CHECK(m.center_freqs.back() == 8000.0);
  const double step = ErbRate(m.center_freqs[1]) - ErbRate(m.center_freqs[0]);
  for (std::size_t i = 1; i < m.size(); ++i) {
    CHECK(m.center_freqs[i] > m.center_freqs[i - 1]);
    CHECK(std::abs(ErbRate(m.center_freqs[i]) - ErbRate(m.center_freqs[i - 1]) - step) < 1e-9);
    CHECK(m.erb_bandwidths[i] == Approx(ErbBandwidth(m.center_freqs[i])).epsilon(1e-14));
  }
}

TEST_CASE("default map spans 50 Hz to Nyquist with 64 channels") {
  const ChannelMap m = DefaultChannelMap(16000);
  REQUIRE(m.size() == 64);
  CHECK(m.center_freqs.front() == 50.0);
  CHECK(m.center_freqs.back() == 8000.0);
}

TEST_CASE("erb_space rejects invalid ranges") {
  CHECK(ThrownCode([] { ErbSpace(0.0, 8000.0, 64); }) == Errc::kInvalidRange);
  CHECK(ThrownCode([] { ErbSpace(500.0, 400.0, 64); }) == Errc::kInvalidRange);
  CHECK(ThrownCode([] { ErbSpace(50.0, 8000.0, 1); }) == Errc::kInvalidRange);
  CHECK(ThrownCode([] { ErbSpace(50.0, std::nan(""), 8); }) == Errc::kInvalidRange);
}

}  // namespace
}  // namespace ears
