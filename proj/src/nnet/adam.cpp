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

#include "ears/nnet/adam.hpp"

#include <cmath>

#include "ears/error.hpp"

namespace ears::nnet {

void Adam::Step(std::span<const ParamRef> params) {
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.push_back(Tensor2::Zero(p.value->rows(), p.value->cols()));
      v_.push_back(Tensor2::Zero(p.value->rows(), p.value->cols()));
    }
  }
  if (m_.size() != params.size()) {
    throw Error(Errc::kShapeMismatch, "adam parameter list changed between steps");
  }
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, t_);
  const double correction2 = 1.0 - std::pow(b2, t_);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Tensor2& g = *params[k].grad;
    Tensor2& p = *params[k].value;
    if (g.rows() != p.rows() || g.cols() != p.cols() || m_[k].rows() != p.rows() ||
        m_[k].cols() != p.cols()) {
      throw Error(Errc::kShapeMismatch, "adam shape mismatch for " + params[k].name);
    }
    m_[k] = b1 * m_[k] + (1.0 - b1) * g;
    v_[k] = b2 * v_[k] + (1.0 - b2) * g.array().square().matrix();
    p.array() -= config_.lr * (m_[k].array() / correction1) /
                 ((v_[k].array() / correction2).sqrt() + config_.eps);
  }
}

double ClipGradNorm(std::span<const ParamRef> params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params) sq += p.grad->squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& p : params) *p.grad *= scale;
  }
  return norm;
}

}  // namespace ears::nnet
