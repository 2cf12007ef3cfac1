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

#ifndef EARS_NNET_CHECKPOINT_HPP_
#define EARS_NNET_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ears/features.hpp"
#include "ears/nnet/models.hpp"

namespace ears::nnet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

// Binary layout, little-endian throughout:
//   "EARS" | u32 version | u32 len, descriptor | u32 len, front-end tag |
//   u32 D, f32 mean[D], f32 std[D] |
//   records until end of file: u32 len, name | u32 rank | u32 dims[rank] |
//   f32 data[prod(dims)]
// Feature caches use the same container with descriptor "features".
struct Checkpoint {
  std::string arch;
  std::string frontend;
  NormStats stats;
  std::vector<NamedTensor> tensors;

  const NamedTensor* Find(const std::string& name) const;
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
// Throws Errc::kCheckpointCorrupt.
Checkpoint ParseCheckpoint(const std::string& bytes);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

NamedTensor ToNamedTensor(const std::string& name, const Tensor2& t);
Tensor2 FromNamedTensor(const NamedTensor& t);

Checkpoint MakeCheckpoint(MaskEstimator& model, const std::string& frontend_tag,
                          const NormStats& stats);
// Rebuilds the network described by `ckpt` and loads its tensors.
std::unique_ptr<MaskEstimator> RestoreModel(const Checkpoint& ckpt);

}  // namespace ears::nnet

#endif  // EARS_NNET_CHECKPOINT_HPP_
