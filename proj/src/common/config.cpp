// Copyright 2026 The Edgeplay Authors
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

#include "edgeplay/common/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace edgeplay {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::string BadConfig::message() const {
  std::string out = "bad config";
  if (line) out += " at line " + std::to_string(line);
  if (!key.empty()) out += " key '" + key + "'";
  if (!reason.empty()) out += ": " + reason;
  return out;
}

Result<Config, BadConfig> Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      return unexpected(BadConfig{line_no, std::string(line), "expected key = value"});
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) return unexpected(BadConfig{line_no, std::string(key), "invalid key"});
    if (cfg.entries_.count(key)) return unexpected(BadConfig{line_no, std::string(key), "duplicate key"});
    cfg.entries_.emplace(std::string(key), Entry{std::string(value), line_no});
  }
  return cfg;
}

Result<Config, BadConfig> Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return unexpected(BadConfig{0, {}, "cannot open " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (auto& [k, _] : entries_) out.push_back(k);
  return out;
}

Result<double, BadConfig> Config::get_double(std::string_view key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.read = true;
  const auto& s = it->second.value;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    return unexpected(BadConfig{it->second.line, std::string(key), "expected a number, got '" + s + "'"});
  }
  return v;
}

Result<long long, BadConfig> Config::get_int(std::string_view key, long long fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.read = true;
  const auto& s = it->second.value;
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    return unexpected(BadConfig{it->second.line, std::string(key), "expected an integer, got '" + s + "'"});
  }
  return v;
}

Result<bool, BadConfig> Config::get_bool(std::string_view key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.read = true;
  const auto& s = it->second.value;
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  return unexpected(BadConfig{it->second.line, std::string(key), "expected a boolean, got '" + s + "'"});
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::string(fallback);
  it->second.read = true;
  return it->second.value;
}

std::vector<std::string> Config::unread_keys() const {
  std::vector<std::string> out;
  for (auto& [k, e] : entries_)
    if (!e.read) out.push_back(k);
  return out;
}

Result<void, BadConfig> Config::check_known(const std::vector<std::string_view>& allowed_prefixes) const {
  for (auto& [k, e] : entries_) {
    bool ok = false;
    for (auto p : allowed_prefixes) {
      if (std::string_view(k).substr(0, p.size()) == p) ok = true;
    }
    if (!ok) return unexpected(BadConfig{e.line, k, "unknown key"});
  }
  return {};
}

void Config::set(std::string key, std::string value) { entries_[std::move(key)] = Entry{std::move(value), 0}; }

}  // namespace edgeplay
