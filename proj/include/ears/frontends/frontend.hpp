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

#ifndef EARS_FRONTENDS_FRONTEND_HPP_
#define EARS_FRONTENDS_FRONTEND_HPP_

#include <map>
#include <string>
#include <string_view>

#include "ears/frontends/carfac.hpp"
#include "ears/frontends/channel_map.hpp"
#include "ears/frontends/drnl.hpp"
#include "ears/frontends/gammatone.hpp"

namespace ears {

enum class FrontendKind { kGt, kDrnl, kCarfac };

std::string_view FrontendName(FrontendKind kind);
// Throws Errc::kConfig for anything but gt, drnl, carfac.
FrontendKind ParseFrontendKind(std::string_view name);

// A front-end choice plus parameter overrides. Serialized as a tag such as
// "carfac" or "carfac;agc_loop_gain=2;max_damping=0.3", which is what model
// checkpoints carry.
class FrontendConfig {
 public:
  FrontendConfig() = default;
  explicit FrontendConfig(FrontendKind kind) : kind_(kind) {}

  static FrontendConfig FromTag(std::string_view tag);
  std::string Tag() const;

  FrontendKind kind() const { return kind_; }
  // Throws Errc::kConfig for keys the selected front-end does not know.
  void SetOverride(const std::string& key, const std::string& value);

  ChannelMap GammatoneMap(int sample_rate = kPipelineRate) const;
  DrnlParams Drnl(const ChannelMap& map, int sample_rate = kPipelineRate) const;
  CarfacParams Carfac() const;

 private:
  double Override(const std::string& key, double fallback) const;

  FrontendKind kind_ = FrontendKind::kGt;
  std::map<std::string, std::string> overrides_;
};

}  // namespace ears

#endif  // EARS_FRONTENDS_FRONTEND_HPP_
