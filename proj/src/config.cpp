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

#include "ears/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ears/error.hpp"

namespace ears {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::kConfig,
                  "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(Errc::kConfig, "line " + std::to_string(lineno) + ": empty key");
    }
    cfg.entries_[key] = Trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

bool KeyValueConfig::Has(const std::string& key) const {
  return entries_.contains(key);
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

std::string KeyValueConfig::GetString(const std::string& key,
                                      std::optional<std::string> fallback) const {
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  if (fallback) return *fallback;
  throw Error(Errc::kConfig, "missing key '" + key + "'");
}

double KeyValueConfig::GetDouble(const std::string& key,
                                 std::optional<double> fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (fallback) return *fallback;
    throw Error(Errc::kConfig, "missing key '" + key + "'");
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::kConfig, "key '" + key + "': not a number: " + it->second);
  }
}

long long KeyValueConfig::GetInt(const std::string& key,
                                 std::optional<long long> fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (fallback) return *fallback;
    throw Error(Errc::kConfig, "missing key '" + key + "'");
  }
  long long v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::kConfig, "key '" + key + "': not an integer: " + s);
  }
  return v;
}

std::uint64_t KeyValueConfig::GetU64(const std::string& key,
                                     std::optional<std::uint64_t> fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (fallback) return *fallback;
    throw Error(Errc::kConfig, "missing key '" + key + "'");
  }
  std::uint64_t v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::kConfig, "key '" + key + "': not an unsigned integer: " + s);
  }
  return v;
}

std::vector<std::string> KeyValueConfig::GetList(const std::string& key) const {
  std::vector<std::string> out;
  auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void KeyValueConfig::RequireKnownKeys(const std::set<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (!known.contains(key)) throw Error(Errc::kConfig, "unknown key '" + key + "'");
  }
}

}  // namespace ears
