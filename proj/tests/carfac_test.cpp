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

#include "ears/frontends/carfac.hpp"
#include "test_signals.hpp"

namespace ears {
namespace {

using testing::ThrownCode;

std::size_t NearestChannel(const ChannelMap& map, double hz) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < map.size(); ++i) {
    if (std::abs(map.center_freqs[i] - hz) < std::abs(map.center_freqs[best] - hz)) best = i;
  }
  return best;
}

TEST_CASE("stages run from base to apex; channels come out ascending") {
  const Carfac c{CarfacParams{}};
  REQUIRE(c.stages().size() == 64);
  for (std::size_t k = 1; k < 64; ++k) CHECK(c.stages()[k].pole_theta < c.stages()[k - 1].pole_theta);
  const ChannelMap& map = c.map();
  REQUIRE(map.size() == 64);
  CHECK(map.center_freqs.front() == Catch::Approx(50.0));
  CHECK(map.center_freqs.back() == Catch::Approx(6800.0));
  for (std::size_t k = 1; k < 64; ++k) CHECK(map.center_freqs[k] > map.center_freqs[k - 1]);
}

TEST_CASE("stage gain normalizes the DC response") {
  const Carfac c{CarfacParams{}};
  for (const auto& s : c.stages()) {
    // Coupled-form stage at fixed r; its DC gain, g * (1 + h * r * sin / den)
    // with den = 1 - 2 r cos + r^2, must be one.
    const double r = 1.0 - s.min_damping * s.pole_theta;
    const double den = 1.0 - 2.0 * r * s.cos_theta + r * r;
    const double dc = Carfac::StageGain(s, r) * (1.0 + s.zero_coeff * r * s.sin_theta / den);
    CHECK(dc == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("silence stays silent") {
  Waveform z;
  z.samples.assign(8000, 0.0);
  const auto out = CarfacAnalyze(z, CarfacParams{});
  REQUIRE(out.num_channels() == 64);
  REQUIRE(out.num_samples() == 8000);
  for (const auto& ch : out.channels) {
    for (double v : ch) REQUIRE(std::abs(v) < 1e-6);
  }
}

TEST_CASE("40 dB level step grows the output by less than 40 dB") {
  const Carfac c{CarfacParams{}};
  const std::size_t k = NearestChannel(c.map(), 1000.0);
  const auto quiet = c.Run(testing::Tone(1000.0, 1e-3, 8000));
  const auto loud = c.Run(testing::Tone(1000.0, 1e-1, 8000));
  const double growth = 20.0 * std::log10(testing::RmsRange(loud.channels[k], 4000, 8000) /
                                          testing::RmsRange(quiet.channels[k], 4000, 8000));
  CHECK(growth < 40.0);
  // Measured 21.5 dB with the default loop gain.
  CHECK(growth == Catch::Approx(21.5).margin(1.0));
}

TEST_CASE("full-scale white noise: bounded output, pole radius below one") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    CarfacDiagnostics diag;
    const auto out = CarfacAnalyze(testing::WhiteNoise(seed, 16000, 1.0), CarfacParams{}, &diag);
    double peak = 0.0;
    for (const auto& ch : out.channels) {
      for (double v : ch) {
        REQUIRE(std::isfinite(v));
        peak = std::max(peak, std::abs(v));
      }
    }
    // Measured peaks of 18 to 25.
    CHECK(peak < 100.0);
    CHECK(diag.max_pole_radius < 1.0);
    CHECK(diag.min_pole_radius > 0.0);
    // The detector pushed damping up from its floor.
    CHECK(diag.min_pole_radius < 1.0 - CarfacParams{}.min_damping * Carfac{CarfacParams{}}.stages()[0].pole_theta);
  }
}

TEST_CASE("unstable or invalid configurations are rejected") {
  CarfacParams p;
  p.max_damping = 5.0;  // r = 1 - 5 * theta < 0 at the base
  CHECK(ThrownCode([&] { Carfac c(p); }) == Errc::kInstability);
  p = CarfacParams{};
  p.min_damping = 0.0;
  CHECK(ThrownCode([&] { Carfac c(p); }) == Errc::kInvalidParams);
  p = CarfacParams{};
  p.max_pole_hz = 9000.0;
  CHECK(ThrownCode([&] { Carfac c(p); }) == Errc::kInvalidParams);
  Waveform x;
  x.samples.assign(16, 0.0);
  x.sample_rate = 8000;
  CHECK(ThrownCode([&] { CarfacAnalyze(x, CarfacParams{}); }) == Errc::kRateMismatch);
}

}  // namespace
}  // namespace ears
