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

#ifndef EARS_PARALLEL_HPP_
#define EARS_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace ears {

// Runs fn(index, worker) for index in [0, count) on up to `jobs` threads,
// worker in [0, jobs). The first exception is rethrown after all threads stop.
void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t, int)>& fn);

}  // namespace ears

#endif  // EARS_PARALLEL_HPP_
