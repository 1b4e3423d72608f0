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
#include <chrono>
#include <cstdint>

namespace edgeplay {

using Millis = std::int64_t;

/// Millisecond time source. Tests run on VirtualClock; the live binaries use
/// SteadyClock. Nothing in the core reads wall-clock time directly.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Millis now_ms() const = 0;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock() : origin_(std::chrono::steady_clock::now()) {}
  Millis now_ms() const override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - origin_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point origin_;
};

/// Wall-clock milliseconds since the Unix epoch, used for envelope ts only.
inline Millis wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

/// Manually advanced clock. Monotonicity is enforced by the owner
/// (net::Harness::advance), not here.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Millis start = 0) : now_(start) {}
  Millis now_ms() const override { return now_.load(std::memory_order_acquire); }
  void set(Millis t) { now_.store(t, std::memory_order_release); }

 private:
  std::atomic<Millis> now_;
};

}  // namespace edgeplay
