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

#include "ears/frontends/frontend.hpp"

#include <set>

#include "ears/error.hpp"

namespace ears {
namespace {

const std::set<std::string>& KnownKeys(FrontendKind kind) {
  static const std::set<std::string> gt = {"channels", "f_min"};
  static const std::set<std::string> drnl = {"channels", "f_min", "input_scale", "nl_c"};
  static const std::set<std::string> carfac = {
      "channels",    "min_pole_hz", "max_pole_hz",       "zero_ratio",
      "min_damping", "max_damping", "agc_time_constant", "agc_spatial_width",
      "agc_loop_gain"};
  switch (kind) {
    case FrontendKind::kGt: return gt;
    case FrontendKind::kDrnl: return drnl;
    case FrontendKind::kCarfac: return carfac;
  }
  return gt;
}

}  // namespace

std::string_view FrontendName(FrontendKind kind) {
  switch (kind) {
    case FrontendKind::kGt: return "gt";
    case FrontendKind::kDrnl: return "drnl";
    case FrontendKind::kCarfac: return "carfac";
  }
  return "gt";
}

FrontendKind ParseFrontendKind(std::string_view name) {
  if (name == "gt") return FrontendKind::kGt;
  if (name == "drnl") return FrontendKind::kDrnl;
  if (name == "carfac") return FrontendKind::kCarfac;
  throw Error(Errc::kConfig, "unknown front-end '" + std::string(name) + "'");
}

FrontendConfig FrontendConfig::FromTag(std::string_view tag) {
  const auto semi = tag.find(';');
  FrontendConfig cfg(ParseFrontendKind(tag.substr(0, semi)));
  std::string_view rest = semi == std::string_view::npos ? "" : tag.substr(semi + 1);
  while (!rest.empty()) {
    const auto next = rest.find(';');
    const std::string_view item = rest.substr(0, next);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::kConfig, "bad front-end override '" + std::string(item) + "'");
    }
    cfg.SetOverride(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    rest = next == std::string_view::npos ? "" : rest.substr(next + 1);
  }
  return cfg;
}

std::string FrontendConfig::Tag() const {
  std::string tag(FrontendName(kind_));
  for (const auto& [k, v] : overrides_) tag += ";" + k + "=" + v;
  return tag;
}

void FrontendConfig::SetOverride(const std::string& key, const std::string& value) {
  if (!KnownKeys(kind_).contains(key)) {
    throw Error(Errc::kConfig, "front-end '" + std::string(FrontendName(kind_)) +
                                   "' has no parameter '" + key + "'");
  }
  try {
    std::size_t used = 0;
    (void)std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(Errc::kConfig, "front-end parameter '" + key + "' is not numeric: " + value);
  }
  overrides_[key] = value;
}

double FrontendConfig::Override(const std::string& key, double fallback) const {
  auto it = overrides_.find(key);
  return it == overrides_.end() ? fallback : std::stod(it->second);
}

ChannelMap FrontendConfig::GammatoneMap(int sample_rate) const {
  return ErbSpace(Override("f_min", kDefaultMinCf), sample_rate / 2.0,
                  static_cast<int>(Override("channels", kDefaultChannels)));
}

DrnlParams FrontendConfig::Drnl(const ChannelMap& map, int sample_rate) const {
  DrnlRegression table;
  table.nl_c = Override("nl_c", table.nl_c);
  DrnlParams p = DefaultDrnlParams(map, sample_rate, table);
  p.input_scale = Override("input_scale", p.input_scale);
  return p;
}

CarfacParams FrontendConfig::Carfac() const {
  CarfacParams p;
  p.num_channels = static_cast<int>(Override("channels", p.num_channels));
  p.min_pole_hz = Override("min_pole_hz", p.min_pole_hz);
  p.max_pole_hz = Override("max_pole_hz", p.max_pole_hz);
  p.zero_ratio = Override("zero_ratio", p.zero_ratio);
  p.min_damping = Override("min_damping", p.min_damping);
  p.max_damping = Override("max_damping", p.max_damping);
  p.agc_time_constant = Override("agc_time_constant", p.agc_time_constant);
  p.agc_spatial_width = static_cast<int>(Override("agc_spatial_width", p.agc_spatial_width));
  p.agc_loop_gain = Override("agc_loop_gain", p.agc_loop_gain);
  return p;
}

}  // namespace ears
