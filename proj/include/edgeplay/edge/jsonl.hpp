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

#include <memory>
#include <string>

#include <json.hpp>

#include "edgeplay/common/result.hpp"
#include "edgeplay/protocol/envelope.hpp"

namespace spdlog {
class logger;
}

namespace edgeplay::edge {

/// Line-delimited JSON records, one object per line. "-" writes to stdout.
class JsonlLog {
 public:
  static Result<std::shared_ptr<JsonlLog>, std::string> open(const std::string& path);
  ~JsonlLog();

  void write(const nlohmann::json& record);
  void flush();
  const std::string& path() const { return path_; }

 private:
  JsonlLog(std::string path, std::shared_ptr<spdlog::logger> logger);
  std::string path_;
  std::shared_ptr<spdlog::logger> logger_;
};

/// The envelope as its wire JSON object.
nlohmann::json envelope_record(const protocol::Envelope& env);

}  // namespace edgeplay::edge
