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
#include <map>
#include <optional>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/clock.hpp"

namespace edgeplay::transport {

/// Ack/resend layer that makes one lane reliable and ordered over a path that
/// may drop, duplicate or reorder. Frame layout:
///
///     0  u8   kind: 0 data, 1 ack
///     1  u32  sequence number, big-endian, starting at 1
///     5  ...  payload (data frames only)
///
/// Every data frame is acked individually; unacked frames are resent after
/// the retransmission timeout, which backs off up to max_rto_ms. A frame is
/// also resent early (without backoff) once fast_retransmit_acks frames sent
/// after its last transmission have been acked.
class ReliableLane {
 public:
  struct Options {
    Millis rto_ms = 200;
    Millis max_rto_ms = 1000;
    /// 0 disables fast retransmit.
    int fast_retransmit_acks = 3;
  };

  struct Incoming {
    std::vector<Bytes> delivered;  // in-order payloads now releasable
    std::optional<Bytes> ack;      // frame to send back
    bool malformed = false;
  };

  ReliableLane() : ReliableLane(Options{}) {}
  explicit ReliableLane(Options opts) : opts_(opts) {}

  /// Wraps payload as the next data frame and tracks it until acked.
  Bytes wrap(ByteView payload, Millis now);
  /// Frames whose timeout expired; their timers are re-armed.
  std::vector<Bytes> due(Millis now);
  Incoming on_frame(ByteView frame);

  std::size_t unacked() const { return unacked_.size(); }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::uint64_t fast_retransmissions() const { return fast_retransmissions_; }
  std::uint64_t duplicates_discarded() const { return duplicates_; }

  static bool looks_like_frame(ByteView bytes) { return bytes.size() >= 5 && bytes[0] <= 1; }

 private:
  struct Pending {
    Bytes frame;
    Millis deadline;
    Millis rto;
    std::uint32_t sent_after = 0;  // highest seq sent when this frame last went out
    int later_acks = 0;
    bool fast = false;
  };

  Options opts_;
  std::uint32_t next_seq_ = 1;
  std::map<std::uint32_t, Pending> unacked_;
  std::uint32_t expected_ = 1;
  std::map<std::uint32_t, Bytes> reorder_;
  std::uint64_t retransmissions_ = 0;
  std::uint64_t fast_retransmissions_ = 0;
  std::uint64_t duplicates_ = 0;
};

}  // namespace edgeplay::transport
