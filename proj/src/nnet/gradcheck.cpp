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

#include "ears/nnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace ears::nnet {

double RelativeError(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult FiniteDiffCheck(const std::function<double()>& loss,
                                std::span<const ParamRef> params, double step) {
  GradCheckResult result;
  for (const auto& p : params) {
    // Copy: the loss evaluations below may overwrite the gradient slots.
    const Tensor2 analytic = *p.grad;
    for (Eigen::Index i = 0; i < p.value->size(); ++i) {
      double& v = p.value->data()[i];
      const double saved = v;
      v = saved + step;
      const double up = loss();
      v = saved - step;
      const double down = loss();
      v = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = RelativeError(analytic.data()[i], numeric);
      ++result.checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_param = p.name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace ears::nnet
