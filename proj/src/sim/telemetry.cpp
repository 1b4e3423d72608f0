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

#include "edgeplay/sim/telemetry.hpp"

#include <cmath>

namespace edgeplay::sim {

TelemetryLimiter::TelemetryLimiter(const Clock& clock, double max_per_second, Emit emit)
    : clock_(clock), interval_(static_cast<Millis>(std::ceil(1000.0 / max_per_second))), emit_(std::move(emit)) {}

void TelemetryLimiter::offer(const std::string& stream, nlohmann::json payload) {
  ++stats_.offered;
  auto& s = streams_[stream];
  const Millis now = clock_.now_ms();
  if (!s.last_sent || now - *s.last_sent >= interval_) {
    if (s.waiting) ++stats_.superseded;
    s.waiting.reset();
    s.last_sent = now;
    ++stats_.emitted;
    emit_(stream, payload);
    return;
  }
  if (s.waiting) ++stats_.superseded;
  s.waiting = std::move(payload);
}

void TelemetryLimiter::flush() {
  const Millis now = clock_.now_ms();
  for (auto& [name, s] : streams_) {
    if (!s.waiting || (s.last_sent && now - *s.last_sent < interval_)) continue;
    s.last_sent = now;
    ++stats_.emitted;
    auto payload = std::move(*s.waiting);
    s.waiting.reset();
    emit_(name, payload);
  }
}

}  // namespace edgeplay::sim
