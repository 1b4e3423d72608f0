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

#include "edgeplay/stream/pacer.hpp"

#include <algorithm>
#include <cmath>

namespace edgeplay::stream {

FramePacer::FramePacer(double target_fps)
    : interval_(1000.0 / target_fps), per_second_(std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(target_fps)))) {}

void FramePacer::submit(EncodedFrame frame) {
  ++stats_.submitted;
  if (last_sent_seq_ && frame.seq <= *last_sent_seq_) {
    ++stats_.superseded;
    return;
  }
  if (pending_) ++stats_.superseded;
  pending_ = std::move(frame);
}

std::optional<EncodedFrame> FramePacer::take(Millis now, bool writable) {
  if (!pending_ || !writable) return std::nullopt;
  const double t = static_cast<double>(now);
  if (next_at_ && t < *next_at_) return std::nullopt;
  while (!recent_.empty() && recent_.front() + 1000 <= now) recent_.pop_front();
  if (recent_.size() >= per_second_) return std::nullopt;
  recent_.push_back(now);
  next_at_ = (next_at_ && t < *next_at_ + interval_) ? *next_at_ + interval_ : t + interval_;
  auto out = std::move(*pending_);
  pending_.reset();
  last_sent_seq_ = out.seq;
  ++stats_.sent;
  return out;
}

}  // namespace edgeplay::stream
