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

#ifndef EARS_WAV_IO_HPP_
#define EARS_WAV_IO_HPP_

#include <filesystem>
#include <optional>

#include "ears/waveform.hpp"

namespace ears {

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float.
// PCM samples are scaled by 1/32768. If `required_rate` is set, a header
// with any other rate is rejected with Errc::kRateMismatch.
Waveform ReadWav(const std::filesystem::path& path,
                 std::optional<int> required_rate = std::nullopt);

// PCM16 clips to [-1, 1 - 2^-15] before quantization.
void WriteWav(const std::filesystem::path& path, const Waveform& wav,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace ears

#endif  // EARS_WAV_IO_HPP_
