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
#include <deque>
#include <optional>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/clock.hpp"

namespace edgeplay::stream {

struct EncodedFrame {
  std::uint32_t seq = 0;
  Millis rendered_at = 0;
  Bytes bytes;
};

/// Rate cap plus a one-slot newest-wins queue. A frame submitted while an
/// older one is still waiting replaces it, so after a stall the first frame
/// out is the newest one rendered. Sends are spaced on a fixed 1000/fps
/// grid; an idle gap resets the grid rather than allowing a burst. A
/// sliding one-second window also holds sends to floor(fps) per second.
class FramePacer {
 public:
  explicit FramePacer(double target_fps);

  void submit(EncodedFrame frame);
  /// The frame to send now, if one is waiting, the path is writable, and
  /// the rate allows it.
  std::optional<EncodedFrame> take(Millis now, bool writable);

  bool has_pending() const { return pending_.has_value(); }
  double interval_ms() const { return interval_; }

  struct Stats {
    std::uint64_t submitted = 0;
    std::uint64_t sent = 0;
    std::uint64_t superseded = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  double interval_;
  std::size_t per_second_;
  std::deque<Millis> recent_;
  std::optional<double> next_at_;
  std::optional<EncodedFrame> pending_;
  std::optional<std::uint32_t> last_sent_seq_;
  Stats stats_;
};

}  // namespace edgeplay::stream
