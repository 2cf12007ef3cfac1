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

#ifndef EARS_TESTS_TEST_SIGNALS_HPP_
#define EARS_TESTS_TEST_SIGNALS_HPP_

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ears/error.hpp"
#include "ears/rng.hpp"
#include "ears/waveform.hpp"

namespace ears::testing {

inline Waveform Tone(double freq, double amp, std::size_t n, double phase = 0.0) {
  Waveform w;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / kPipelineRate + phase);
  }
  return w;
}

inline Waveform WhiteNoise(std::uint64_t seed, std::size_t n, double amp) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  for (auto& s : w.samples) s = amp * rng.Uniform(-1.0, 1.0);
  return w;
}

// Sum of random-phase sinusoids on the 1 Hz grid between f_lo and f_hi;
// periodic in n = 16000 and strictly band limited.
inline Waveform BandNoise(std::uint64_t seed, std::size_t n, double f_lo, double f_hi,
                          double rms = 0.1) {
  Rng rng(seed);
  Waveform w;
  w.samples.assign(n, 0.0);
  for (int f = static_cast<int>(std::ceil(f_lo)); f <= static_cast<int>(f_hi); ++f) {
    const double phase = 2.0 * std::numbers::pi * rng.Uniform();
    const double step = 2.0 * std::numbers::pi * f / kPipelineRate;
    for (std::size_t i = 0; i < n; ++i) w.samples[i] += std::cos(step * i + phase);
  }
  const double r = Rms(w.samples);
  for (auto& s : w.samples) s *= rms / r;
  return w;
}

inline double SnrDb(const std::vector<double>& ref, const std::vector<double>& test,
                    std::size_t begin = 0, std::size_t end = 0) {
  if (end == 0) end = ref.size();
  double s = 0.0, e = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    s += ref[i] * ref[i];
    e += (ref[i] - test[i]) * (ref[i] - test[i]);
  }
  return 10.0 * std::log10(s / e);
}

inline double RmsRange(const std::vector<double>& x, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += x[i] * x[i];
  return std::sqrt(s / static_cast<double>(end - begin));
}

// Error code thrown by f, or nullopt when it returns normally.
template <typename F>
std::optional<Errc> ThrownCode(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("ears_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace ears::testing

#endif  // EARS_TESTS_TEST_SIGNALS_HPP_
