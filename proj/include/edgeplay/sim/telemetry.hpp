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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "edgeplay/common/clock.hpp"
#include "json.hpp"

namespace edgeplay::sim {

/// Per-stream rate limiter, newest wins. A sample offered inside the
/// stream's interval replaces any sample already waiting; flush() sends the
/// waiting ones once their interval has passed.
class TelemetryLimiter {
 public:
  using Emit = std::function<void(const std::string& stream, const nlohmann::json& payload)>;

  TelemetryLimiter(const Clock& clock, double max_per_second, Emit emit);

  void offer(const std::string& stream, nlohmann::json payload);
  void flush();

  struct Stats {
    std::uint64_t offered = 0;
    std::uint64_t emitted = 0;
    std::uint64_t superseded = 0;
  };
  const Stats& stats() const { return stats_; }
  Millis interval_ms() const { return interval_; }

 private:
  struct Stream {
    std::optional<Millis> last_sent;
    std::optional<nlohmann::json> waiting;
  };

  const Clock& clock_;
  Millis interval_;
  Emit emit_;
  std::map<std::string, Stream> streams_;
  Stats stats_;
};

}  // namespace edgeplay::sim
