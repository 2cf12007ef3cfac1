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

#include "ears/features.hpp"

#include <algorithm>
#include <string>

#include "ears/error.hpp"

namespace ears {

std::size_t FrameCount(std::size_t num_samples) {
  return (num_samples + kFrameShift - 1) / kFrameShift;
}

Matrix LogCompress(const Spectrogram& s) {
  return s.values.unaryExpr([](double v) { return std::log(std::max(v, kLogFloor)); });
}

Matrix DeltaCoeffs(const Matrix& m) {
  const Eigen::Index frames = m.rows();
  Matrix d = Matrix::Zero(frames, m.cols());
  if (frames == 0) return d;
  const auto row = [&](Eigen::Index t) {
    return m.row(std::clamp<Eigen::Index>(t, 0, frames - 1));
  };
  constexpr double kDenominator = 2.0 * (1.0 * 1.0 + 2.0 * 2.0);
  for (Eigen::Index t = 0; t < frames; ++t) {
    d.row(t) = (1.0 * (row(t + 1) - row(t - 1)) + 2.0 * (row(t + 2) - row(t - 2))) /
               kDenominator;
  }
  return d;
}

Matrix ContextExpand(const Matrix& m, int k) {
  if (k < 0) throw Error(Errc::kInvalidParams, "negative context width");
  const Eigen::Index frames = m.rows();
  const Eigen::Index dim = m.cols();
  const Eigen::Index width = 2 * k + 1;
  Matrix out(frames, dim * width);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index j = 0; j < width; ++j) {
      const Eigen::Index src = std::clamp<Eigen::Index>(t + j - k, 0, frames - 1);
      out.block(t, j * dim, 1, dim) = m.row(src);
    }
  }
  return out;
}

NormStats ComputeStats(std::span<const Matrix> training) {
  if (training.empty()) throw Error(Errc::kEmptyManifest, "no training features");
  const Eigen::Index dim = training.front().cols();
  Vector sum = Vector::Zero(dim);
  double count = 0.0;
  for (const Matrix& m : training) {
    if (m.cols() != dim) throw Error(Errc::kShapeMismatch, "feature dimensions differ");
    sum += m.colwise().sum().transpose();
    count += static_cast<double>(m.rows());
  }
  if (count == 0.0) throw Error(Errc::kEmptyManifest, "no training frames");
  NormStats stats;
  stats.mean = sum / count;
  Vector sq = Vector::Zero(dim);
  for (const Matrix& m : training) {
    sq += (m.rowwise() - stats.mean.transpose()).array().square().colwise().sum().matrix().transpose();
  }
  stats.std = (sq / count).array().sqrt().max(kStdFloor).matrix();
  return stats;
}

Matrix Normalize(const Matrix& m, const NormStats& stats) {
  if (m.cols() != stats.mean.size() || m.cols() != stats.std.size()) {
    throw Error(Errc::kShapeMismatch, "normalization stats have " +
                                          std::to_string(stats.mean.size()) +
                                          " dims, features have " + std::to_string(m.cols()));
  }
  return ((m.rowwise() - stats.mean.transpose()).array().rowwise() /
          stats.std.transpose().array())
      .matrix();
}

Mask ComputeIrm(const Spectrogram& speech, const Spectrogram& noise) {
  if (speech.values.rows() != noise.values.rows() ||
      speech.values.cols() != noise.values.cols()) {
    throw Error(Errc::kShapeMismatch, "speech and noise spectrograms differ in shape");
  }
  Mask mask;
  mask.values = speech.values.binaryExpr(noise.values, [](double s, double w) {
    const double total = s + w;
    return total < kIrmSilence ? 0.0 : std::clamp(s / total, 0.0, 1.0);
  });
  return mask;
}

Matrix BaseFeatures(const Spectrogram& s) {
  const Matrix logs = LogCompress(s).transpose();
  const Matrix deltas = DeltaCoeffs(logs);
  Matrix out(logs.rows(), logs.cols() * 2);
  out << logs, deltas;
  return out;
}

Spectrogram FrontendSpectrogram(const Waveform& x, const FrontendConfig& frontend) {
  RequireRate(x);
  switch (frontend.kind()) {
    case FrontendKind::kGt:
      return EnvelopeEnergies(GtAnalyze(x, frontend.GammatoneMap(x.sample_rate)));
    case FrontendKind::kDrnl: {
      const ChannelMap map = frontend.GammatoneMap(x.sample_rate);
      return EnvelopeEnergies(DrnlAnalyze(x, map, frontend.Drnl(map, x.sample_rate)));
    }
    case FrontendKind::kCarfac:
      return EnvelopeEnergies(CarfacAnalyze(x, frontend.Carfac()));
  }
  throw Error(Errc::kConfig, "unknown front-end");
}

Spectrogram GammatoneSpectrogram(const Waveform& x) {
  RequireRate(x);
  return EnvelopeEnergies(GtAnalyze(x, DefaultChannelMap(x.sample_rate)));
}

}  // namespace ears
