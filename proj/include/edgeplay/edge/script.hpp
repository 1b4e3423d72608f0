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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/result.hpp"

namespace edgeplay::edge {

/// Command script shared by the offline edge and the headless client. One
/// command per line; '#' starts a comment.
///
///     load TinkerCoin              scene.load {scene}
///     train on | off               training.set_flag {training}
///     move <dx> <dy> <speed> [mode]
///     policy <name>                policy.switch {name}
///     send <type> <json payload>   any envelope
///     wait <n>ms | <n>s | <n>      pause; a bare number is seconds
struct ScriptStep {
  enum class Kind { Send, Wait };
  Kind kind = Kind::Send;
  std::string type;
  nlohmann::json payload = nlohmann::json::object();
  Millis wait_ms = 0;
  int line = 0;
};

struct ScriptError {
  int line = 0;
  std::string reason;
  std::string message() const { return "line " + std::to_string(line) + ": " + reason; }
};

Result<std::vector<ScriptStep>, ScriptError> parse_script(std::string_view text);
Result<std::vector<ScriptStep>, ScriptError> load_script(const std::string& path);

/// Sum of the waits.
Millis script_duration(const std::vector<ScriptStep>& steps);

}  // namespace edgeplay::edge
