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

#ifndef EARS_NNET_ADAM_HPP_
#define EARS_NNET_ADAM_HPP_

#include <span>
#include <vector>

#include "ears/nnet/layers.hpp"

namespace ears::nnet {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Moments are allocated on the first step and matched to parameters by
// position, so the same parameter list must be passed every time.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void Step(std::span<const ParamRef> params);

  int step_count() const { return t_; }
  const AdamConfig& config() const { return config_; }
  const std::vector<Tensor2>& first_moments() const { return m_; }
  const std::vector<Tensor2>& second_moments() const { return v_; }

 private:
  AdamConfig config_;
  int t_ = 0;
  std::vector<Tensor2> m_;
  std::vector<Tensor2> v_;
};

// Rescales all gradients so their joint L2 norm is at most `max_norm`.
// Returns the norm before clipping.
double ClipGradNorm(std::span<const ParamRef> params, double max_norm);

}  // namespace ears::nnet

#endif  // EARS_NNET_ADAM_HPP_
