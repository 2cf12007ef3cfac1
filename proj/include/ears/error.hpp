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

#ifndef EARS_ERROR_HPP_
#define EARS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ears {

enum class Errc {
  kMalformedFile,
  kUnsupportedFormat,
  kRateMismatch,
  kIoError,
  kInvalidRange,
  kShapeMismatch,
  kInvalidParams,
  kInstability,
  kDegenerateDim,
  kSilentInput,
  kEmptyCorpus,
  kEmptyManifest,
  kNonFiniteLoss,
  kCheckpointCorrupt,
  kLengthMismatch,
  kConfig,
};

std::string_view ErrcName(Errc code);

// Single exception type for the library; the code tells callers which
// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ears

#endif  // EARS_ERROR_HPP_
