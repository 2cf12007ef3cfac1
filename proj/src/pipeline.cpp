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

#include "ears/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "ears/error.hpp"
#include "ears/frontends/gammatone.hpp"

namespace ears {

std::vector<double> InterpolateGains(const Eigen::Ref<const RowVector>& frames,
                                     std::size_t num_samples) {
  std::vector<double> g(num_samples, 0.0);
  const Eigen::Index f = frames.size();
  if (f == 0) return g;
  constexpr double kCenter = (kFrameLength - 1) / 2.0;
  for (std::size_t n = 0; n < num_samples; ++n) {
    const double u = (static_cast<double>(n) - kCenter) / kFrameShift;
    if (u <= 0.0) {
      g[n] = frames[0];
    } else if (u >= static_cast<double>(f - 1)) {
      g[n] = frames[f - 1];
    } else {
      const auto i = static_cast<Eigen::Index>(u);
      const double w = u - static_cast<double>(i);
      g[n] = (1.0 - w) * frames[i] + w * frames[i + 1];
    }
  }
  return g;
}

ComplexCochleagram ApplyMask(const ComplexCochleagram& c, const Mask& m) {
  const std::size_t n = c.num_samples();
  if (static_cast<std::size_t>(m.values.rows()) != c.num_channels() ||
      static_cast<std::size_t>(m.values.cols()) != FrameCount(n)) {
    throw Error(Errc::kShapeMismatch, "mask is " + std::to_string(m.values.rows()) + "x" +
                                          std::to_string(m.values.cols()) + ", cochleagram needs " +
                                          std::to_string(c.num_channels()) + "x" +
                                          std::to_string(FrameCount(n)));
  }
  ComplexCochleagram out = c;
  for (std::size_t b = 0; b < c.num_channels(); ++b) {
    const auto gains = InterpolateGains(m.values.row(static_cast<Eigen::Index>(b)), n);
    for (std::size_t i = 0; i < n; ++i) out.channels[b][i] *= gains[i];
  }
  return out;
}

Waveform EnhanceWithMask(const Waveform& noisy, const Mask& mask) {
  RequireRate(noisy);
  RequireFinite(noisy);
  const std::size_t n = noisy.size();
  const ChannelMap map = DefaultChannelMap(kPipelineRate);
  if (static_cast<std::size_t>(mask.values.rows()) != map.size() ||
      static_cast<std::size_t>(mask.values.cols()) != FrameCount(n)) {
    throw Error(Errc::kShapeMismatch, "mask does not match the input");
  }
  const GammatoneFilterbank bank(map);
  const auto d = static_cast<std::size_t>(bank.delay());

  // Trailing zeros let the delayed synthesis cover the whole input.
  Waveform padded = noisy;
  padded.samples.resize(n + d, 0.0);
  const std::size_t frames = FrameCount(n + d);
  Mask extended;
  extended.values.resize(mask.values.rows(), static_cast<Eigen::Index>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    const auto src = static_cast<Eigen::Index>(std::min<std::size_t>(f, std::max<std::size_t>(FrameCount(n), 1) - 1));
    if (mask.values.cols() == 0) {
      extended.values.col(static_cast<Eigen::Index>(f)).setZero();
    } else {
      extended.values.col(static_cast<Eigen::Index>(f)) = mask.values.col(src);
    }
  }
  const Resynthesis r = bank.Synthesize(ApplyMask(bank.Analyze(padded), extended));
  Waveform out;
  out.samples.assign(r.signal.samples.begin() + static_cast<std::ptrdiff_t>(d),
                     r.signal.samples.begin() + static_cast<std::ptrdiff_t>(d + n));
  return out;
}

Mask OracleMask(const Waveform& clean, const Waveform& noise) {
  if (clean.size() != noise.size()) throw Error(Errc::kLengthMismatch, "clean and noise lengths differ");
  return ComputeIrm(GammatoneSpectrogram(clean), GammatoneSpectrogram(noise));
}

Enhancer::Enhancer(const nnet::Checkpoint& ckpt)
    : frontend_(FrontendConfig::FromTag(ckpt.frontend)),
      stats_(ckpt.stats),
      model_(nnet::RestoreModel(ckpt)) {
  if (model_->arch().output_dim() != kDefaultChannels) {
    throw Error(Errc::kCheckpointCorrupt, "mask width must equal the channel count");
  }
}

Mask Enhancer::PredictMask(const Waveform& noisy) {
  RequireRate(noisy);
  RequireFinite(noisy);
  const Matrix x = Normalize(BaseFeatures(FrontendSpectrogram(noisy, frontend_)), stats_);
  Mask m;
  m.values = model_->Predict(x).transpose();
  // Defensive clamp; NaN maps to zero gain.
  m.values = m.values.unaryExpr([](double v) { return std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0); });
  return m;
}

Waveform Enhancer::Run(const Waveform& noisy) {
  return EnhanceWithMask(noisy, PredictMask(noisy));
}

Waveform Enhance(const Waveform& noisy, const nnet::Checkpoint& ckpt) {
  Enhancer e(ckpt);
  return e.Run(noisy);
}

}  // namespace ears
