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

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "edgeplay/common/result.hpp"

namespace edgeplay {

/// Reported for a bad config file or a bad value. line is 1-based, or 0 when
/// the value did not come from a file.
struct BadConfig {
  std::size_t line = 0;
  std::string key;
  std::string reason;

  std::string message() const;
};

/// Parsed key = value text. Blank lines and lines starting with '#' are
/// ignored; keys are dotted lowercase names such as physics.mu.
///
///     # trainer
///     trainer.seed = 42
///     curriculum.compress = 50
class Config {
 public:
  static Result<Config, BadConfig> parse(std::string_view text);
  static Result<Config, BadConfig> load_file(const std::string& path);

  bool contains(std::string_view key) const;
  std::vector<std::string> keys() const;

  /// Typed getters. A missing key yields fallback; an unparsable value yields
  /// BadConfig naming the line and key.
  Result<double, BadConfig> get_double(std::string_view key, double fallback) const;
  Result<long long, BadConfig> get_int(std::string_view key, long long fallback) const;
  Result<bool, BadConfig> get_bool(std::string_view key, bool fallback) const;
  std::string get_string(std::string_view key, std::string_view fallback) const;

  /// Fails with BadConfig on the first key outside allowed.
  Result<void, BadConfig> check_known(const std::vector<std::string_view>& allowed_prefixes) const;

  /// Keys no getter has asked for yet, in key order. Catches typos inside a
  /// known section once every consumer has read its settings.
  std::vector<std::string> unread_keys() const;

  void set(std::string key, std::string value);

 private:
  struct Entry {
    std::string value;
    std::size_t line;
    mutable bool read = false;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace edgeplay
