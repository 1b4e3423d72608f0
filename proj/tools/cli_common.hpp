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

#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeplay/common/config.hpp"

namespace edgeplay::cli {

enum ExitCode { kOk = 0, kFailure = 1, kBadConfig = 2, kRelayUnreachable = 3, kEstablishFailed = 4 };

inline std::atomic<bool> g_stop{false};

inline void install_stop_handlers() {
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
}

/// --config, else $GEWU_CONFIG, else defaults. Unknown sections are an
/// error. Prints the BadConfig line and returns nullopt on failure.
inline std::optional<Config> load_config(std::string path) {
  if (path.empty())
    if (const char* env = std::getenv("GEWU_CONFIG")) path = env;
  if (path.empty()) return Config{};
  auto c = Config::load_file(path);
  if (!c) {
    std::fprintf(stderr, "BadConfig: %s\n", c.error().message().c_str());
    return std::nullopt;
  }
  auto known = c->check_known({"physics.", "reward.", "coins.", "curriculum.", "trainer.", "playground.", "robohetu.",
                               "tinkercoin.", "telemetry.", "net.", "stream."});
  if (!known) {
    std::fprintf(stderr, "BadConfig: %s\n", known.error().message().c_str());
    return std::nullopt;
  }
  return std::move(*c);
}

/// Call after every consumer has read its settings. Keys under ignored
/// prefixes belong to other tools sharing the file.
inline bool reject_unread(const Config& cfg, const std::vector<std::string_view>& ignored) {
  for (const auto& k : cfg.unread_keys()) {
    bool skip = false;
    for (auto p : ignored) skip = skip || std::string_view(k).substr(0, p.size()) == p;
    if (skip) continue;
    std::fprintf(stderr, "BadConfig: unknown key '%s'\n", k.c_str());
    return true;
  }
  return false;
}

}  // namespace edgeplay::cli
