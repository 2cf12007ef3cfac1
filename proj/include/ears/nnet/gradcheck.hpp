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

#ifndef EARS_NNET_GRADCHECK_HPP_
#define EARS_NNET_GRADCHECK_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "ears/nnet/layers.hpp"

namespace ears::nnet {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
  std::size_t checked = 0;
};

// |a - n| / max(|a|, |n|, 1e-8)
double RelativeError(double analytic, double numeric);

// Compares the gradients already stored in each ParamRef::grad against
// central differences of `loss`, perturbing ParamRef::value in place (and
// restoring it). `loss` must be a pure function of the parameter values.
GradCheckResult FiniteDiffCheck(const std::function<double()>& loss,
                                std::span<const ParamRef> params, double step = 1e-5);

}  // namespace ears::nnet

#endif  // EARS_NNET_GRADCHECK_HPP_
