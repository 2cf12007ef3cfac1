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

#ifndef EARS_CONFIG_HPP_
#define EARS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ears {

// Plain-text `key = value` configuration with `#` comments.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig Parse(const std::string& text);
  static KeyValueConfig Load(const std::filesystem::path& path);

  bool Has(const std::string& key) const;
  void Set(const std::string& key, const std::string& value);

  std::string GetString(const std::string& key,
                        std::optional<std::string> fallback = {}) const;
  double GetDouble(const std::string& key,
                   std::optional<double> fallback = {}) const;
  long long GetInt(const std::string& key,
                   std::optional<long long> fallback = {}) const;
  std::uint64_t GetU64(const std::string& key,
                       std::optional<std::uint64_t> fallback = {}) const;
  // Comma-separated list; empty entries are dropped.
  std::vector<std::string> GetList(const std::string& key) const;

  // Throws Errc::kConfig naming the first key not in `known`.
  void RequireKnownKeys(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ears

#endif  // EARS_CONFIG_HPP_
