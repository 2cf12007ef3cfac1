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

#ifndef EARS_PIPELINE_HPP_
#define EARS_PIPELINE_HPP_

#include <memory>

#include "ears/features.hpp"
#include "ears/frontends/channel_map.hpp"
#include "ears/frontends/frontend.hpp"
#include "ears/nnet/checkpoint.hpp"
#include "ears/waveform.hpp"

namespace ears {

// Per-sample gain for one channel: linear between frame centers
// (f * shift + (length - 1) / 2), held constant beyond the first and last.
std::vector<double> InterpolateGains(const Eigen::Ref<const RowVector>& frames,
                                     std::size_t num_samples);

// Scales every complex subband sample by the interpolated mask value. The
// mask must have one row per channel and FrameCount(num_samples) columns.
ComplexCochleagram ApplyMask(const ComplexCochleagram& c, const Mask& m);

// GT analysis of `noisy`, masking, synthesis, and delay trimming. The mask
// covers FrameCount(noisy.size()) frames; output length equals input length.
Waveform EnhanceWithMask(const Waveform& noisy, const Mask& mask);

// IRM from the known speech and noise components.
Mask OracleMask(const Waveform& clean, const Waveform& noise);

class Enhancer {
 public:
  explicit Enhancer(const nnet::Checkpoint& ckpt);

  // Mask in [0, 1], channels x frames.
  Mask PredictMask(const Waveform& noisy);
  Waveform Run(const Waveform& noisy);

  const FrontendConfig& frontend() const { return frontend_; }
  const nnet::MaskEstimator& model() const { return *model_; }

 private:
  FrontendConfig frontend_;
  NormStats stats_;
  std::unique_ptr<nnet::MaskEstimator> model_;
};

Waveform Enhance(const Waveform& noisy, const nnet::Checkpoint& ckpt);

}  // namespace ears

#endif  // EARS_PIPELINE_HPP_
