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

#ifndef EARS_FEATURES_HPP_
#define EARS_FEATURES_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "ears/frontends/channel_map.hpp"
#include "ears/frontends/frontend.hpp"
#include "ears/matrix.hpp"
#include "ears/waveform.hpp"

namespace ears {

// 20 ms / 10 ms at 16 kHz.
inline constexpr int kFrameLength = 320;
inline constexpr int kFrameShift = 160;
inline constexpr int kContextFrames = 3;
inline constexpr double kLogFloor = 1e-10;
inline constexpr double kStdFloor = 1e-8;
inline constexpr double kIrmSilence = 1e-10;

// ceil(n / shift)
std::size_t FrameCount(std::size_t num_samples);

// Frame-wise RMS envelope magnitudes.
struct Spectrogram {
  Matrix values;  // B x F, nonnegative
  int frame_length = kFrameLength;
  int frame_shift = kFrameShift;

  std::size_t num_channels() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t num_frames() const { return static_cast<std::size_t>(values.cols()); }
};

struct Mask {
  Matrix values;  // B x F in [0, 1]
};

struct NormStats {
  Vector mean;
  Vector std;
};

namespace detail {
inline double Magnitude(double v) { return std::abs(v); }
inline double Magnitude(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

// value(b, f) = sqrt(mean |c_b|^2 over samples [f*H, f*H + L)), tail padded
// with zeros.
template <typename T>
Spectrogram EnvelopeEnergies(const BasicCochleagram<T>& c) {
  const std::size_t n = c.num_samples();
  const std::size_t frames = FrameCount(n);
  Spectrogram s;
  s.values = Matrix::Zero(static_cast<Eigen::Index>(c.num_channels()),
                          static_cast<Eigen::Index>(frames));
  for (std::size_t b = 0; b < c.num_channels(); ++b) {
    const auto& ch = c.channels[b];
    for (std::size_t f = 0; f < frames; ++f) {
      const std::size_t start = f * kFrameShift;
      const std::size_t stop = std::min(n, start + kFrameLength);
      double acc = 0.0;
      for (std::size_t i = start; i < stop; ++i) {
        const double m = detail::Magnitude(ch[i]);
        acc += m * m;
      }
      s.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(f)) =
          std::sqrt(acc / kFrameLength);
    }
  }
  return s;
}

// ln(max(value, 1e-10)), same B x F layout.
Matrix LogCompress(const Spectrogram& s);

// Regression deltas over +-2 frames along the rows of an F x B matrix,
// replicating the edge frames.
Matrix DeltaCoeffs(const Matrix& m);

// Row t becomes rows t-k..t+k concatenated; boundary rows replicated.
Matrix ContextExpand(const Matrix& m, int k = kContextFrames);

// Per-dimension mean and population std over all rows of all matrices;
// std is floored at 1e-8.
NormStats ComputeStats(std::span<const Matrix> training);
Matrix Normalize(const Matrix& m, const NormStats& stats);

// M = S / (S + W); 0 where S + W < 1e-10. Throws Errc::kShapeMismatch.
Mask ComputeIrm(const Spectrogram& speech, const Spectrogram& noise);

// F x 2B: log envelopes followed by their deltas.
Matrix BaseFeatures(const Spectrogram& s);

// Envelope spectrogram of `x` through the chosen front-end (64 channels by
// default). GT and DRNL use the ERB map; CARFAC its own pole map.
Spectrogram FrontendSpectrogram(const Waveform& x, const FrontendConfig& frontend);

// GT-domain envelopes, the domain masks live in.
Spectrogram GammatoneSpectrogram(const Waveform& x);

}  // namespace ears

#endif  // EARS_FEATURES_HPP_
