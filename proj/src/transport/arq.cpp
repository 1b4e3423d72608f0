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

#include "edgeplay/transport/arq.hpp"

#include <algorithm>

namespace edgeplay::transport {

namespace {
constexpr std::uint8_t kData = 0;
constexpr std::uint8_t kAck = 1;
}  // namespace

Bytes ReliableLane::wrap(ByteView payload, Millis now) {
  Bytes frame;
  frame.reserve(5 + payload.size());
  frame.push_back(kData);
  const std::uint32_t seq = next_seq_++;
  put_u32_be(frame, seq);
  frame.insert(frame.end(), payload.begin(), payload.end());
  unacked_.emplace(seq, Pending{frame, now + opts_.rto_ms, opts_.rto_ms, seq});
  return frame;
}

std::vector<Bytes> ReliableLane::due(Millis now) {
  std::vector<Bytes> out;
  for (auto& [seq, p] : unacked_) {
    if (p.deadline > now && !p.fast) continue;
    out.push_back(p.frame);
    if (p.fast) {
      ++fast_retransmissions_;
    } else {
      p.rto = std::min(opts_.max_rto_ms, p.rto * 2);
    }
    p.deadline = now + p.rto;
    p.fast = false;
    p.later_acks = 0;
    p.sent_after = next_seq_ - 1;
    ++retransmissions_;
  }
  return out;
}

ReliableLane::Incoming ReliableLane::on_frame(ByteView frame) {
  Incoming in;
  if (!looks_like_frame(frame)) {
    in.malformed = true;
    return in;
  }
  const std::uint32_t seq = get_u32_be(frame.data() + 1);
  if (frame[0] == kAck) {
    if (unacked_.erase(seq) == 0 || opts_.fast_retransmit_acks <= 0) return in;
    for (auto& [pending, p] : unacked_) {
      if (pending > seq) break;
      if (seq > p.sent_after && ++p.later_acks >= opts_.fast_retransmit_acks) p.fast = true;
    }
    return in;
  }
  Bytes ack{kAck};
  put_u32_be(ack, seq);
  in.ack = std::move(ack);
  if (seq < expected_ || reorder_.count(seq)) {
    ++duplicates_;
    return in;
  }
  reorder_.emplace(seq, Bytes(frame.begin() + 5, frame.end()));
  for (auto it = reorder_.find(expected_); it != reorder_.end(); it = reorder_.find(expected_)) {
    in.delivered.push_back(std::move(it->second));
    reorder_.erase(it);
    ++expected_;
  }
  return in;
}

}  // namespace edgeplay::transport
