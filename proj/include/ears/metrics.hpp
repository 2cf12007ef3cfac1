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

#ifndef EARS_METRICS_HPP_
#define EARS_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ears/waveform.hpp"

namespace ears {

inline constexpr int kMetricFrameLength = 320;
inline constexpr int kMetricFrameShift = 160;
inline constexpr double kSegSnrMin = -10.0;
inline constexpr double kSegSnrMax = 35.0;
inline constexpr double kSegSnrSilence = 1e-8;
inline constexpr int kLpcOrder = 10;
inline constexpr double kCdMax = 10.0;
// Frames more than this far below the loudest reference frame are inactive.
inline constexpr double kCdActivityRangeDb = 50.0;

// Mean of clamped per-frame SNRs over frames whose reference energy exceeds
// 1e-8. Returns 0 when no frame qualifies.
double SegSnr(const Waveform& ref, const Waveform& test);

// Autocorrelation lags 0..order of an (already windowed) frame.
std::vector<double> Autocorrelation(std::span<const double> frame, int order);

struct Lpc {
  std::vector<double> a;  // a[0] = 1; A(z) = sum a[k] z^-k
  double error = 0.0;
};

// Levinson-Durbin. A zero-energy frame gives A(z) = 1.
Lpc LevinsonDurbin(std::span<const double> r, int order);

// c_1..c_p of the all-pole model 1/A(z).
std::vector<double> LpcToCepstrum(std::span<const double> a, int count);

// Windowing is the caller's job.
std::vector<double> LpcCepstra(std::span<const double> frame, int order = kLpcOrder);

// (10 / ln 10) * sqrt(2 * sum (c_ref - c_test)^2), clamped to [0, 10].
double CepstralFrameDistance(std::span<const double> c_ref, std::span<const double> c_test);

// Hamming-windowed 20 ms frames, mean over speech-active reference frames.
double CepstralDistance(const Waveform& ref, const Waveform& test);

struct DeltaReport {
  double segsnr_noisy = 0.0;
  double segsnr_enh = 0.0;
  double cd_noisy = 0.0;
  double cd_enh = 0.0;
  double delta_segsnr = 0.0;  // enhanced minus noisy
  double delta_cd = 0.0;      // noisy minus enhanced
};

DeltaReport ComputeDeltaReport(const Waveform& clean, const Waveform& noisy,
                               const Waveform& enhanced);

struct ReportContext {
  std::string file;
  std::string snr_condition;
  std::string noise_type;
  std::string frontend;
  std::string arch;
};

// One JSON object; pesq is always null.
std::string ReportJson(const ReportContext& ctx, const DeltaReport& r);

}  // namespace ears

#endif  // EARS_METRICS_HPP_
