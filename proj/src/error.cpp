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

#include "ears/error.hpp"

namespace ears {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kMalformedFile: return "MalformedFile";
    case Errc::kUnsupportedFormat: return "UnsupportedFormat";
    case Errc::kRateMismatch: return "RateMismatch";
    case Errc::kIoError: return "IoError";
    case Errc::kInvalidRange: return "InvalidRange";
    case Errc::kShapeMismatch: return "ShapeMismatch";
    case Errc::kInvalidParams: return "InvalidParams";
    case Errc::kInstability: return "Instability";
    case Errc::kDegenerateDim: return "DegenerateDim";
    case Errc::kSilentInput: return "SilentInput";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kEmptyManifest: return "EmptyManifest";
    case Errc::kNonFiniteLoss: return "NonFiniteLoss";
    case Errc::kCheckpointCorrupt: return "CheckpointCorrupt";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace ears
