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

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/lane.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/net/profile.hpp"

namespace edgeplay::net {

struct ClockRegression {
  Millis now = 0;
  Millis requested = 0;
};

/// Virtual-time event loop. Events scheduled for the same instant fire in
/// the order they were scheduled.
class Harness {
 public:
  using Action = std::function<void()>;
  using EventId = std::uint64_t;

  explicit Harness(Millis start = 0);

  const VirtualClock& clock() const { return clock_; }
  Millis now() const { return clock_.now_ms(); }

  /// Times in the past are clamped to now.
  EventId schedule_at(Millis t, Action action);
  bool reschedule(EventId id, Millis t);
  std::optional<Millis> time_of(EventId id) const;
  bool cancel(EventId id);

  /// Fires every event due at or before until_ms, including ones scheduled
  /// while firing, then sets the clock to until_ms. Returns the number fired.
  Result<std::size_t, ClockRegression> advance(Millis until_ms);

  /// Advances to until_ms in step_ms increments, calling on_step after each
  /// increment. Returns the number of events fired.
  std::size_t run(Millis until_ms, Millis step_ms, const std::function<void()>& on_step = {});

  std::size_t pending() const { return queue_.size(); }

 private:
  using Key = std::pair<Millis, std::uint64_t>;
  VirtualClock clock_;
  std::uint64_t next_order_ = 0;
  EventId next_id_ = 1;
  std::map<Key, std::pair<EventId, Action>> queue_;
  std::map<EventId, Key> index_;
};

struct ChannelStats {
  std::array<std::uint64_t, kLaneCount> sent{};
  std::array<std::uint64_t, kLaneCount> delivered{};
  std::array<std::uint64_t, kLaneCount> dropped{};
  std::array<std::uint64_t, kLaneCount> duplicated{};
};

/// One direction of a simulated path. Applies the profile to every message
/// and hands surviving copies to the receiver when the harness fires them.
class HarnessChannel {
 public:
  using Receiver = std::function<void(Lane, Bytes)>;

  HarnessChannel(Harness& harness, NetProfile profile, std::uint64_t stream, Receiver receiver);

  void send(Lane lane, ByteView bytes);

  /// A blocked channel drops every message (a path that never verifies).
  void set_blocked(bool blocked) { blocked_ = blocked; }
  bool blocked() const { return blocked_; }

  /// Until t, the channel reports not writable and holds sends; they enter
  /// the network in order at t.
  void stall_until(Millis t);
  bool writable() const;

  const ChannelStats& stats() const { return stats_; }
  const NetProfile& profile() const { return profile_; }

 private:
  void enter_network(Lane lane, Bytes bytes, Millis send_time);
  void release_stalled();

  Harness& harness_;
  NetProfile profile_;
  std::uint64_t stream_;
  Receiver receiver_;
  bool blocked_ = false;
  Millis stalled_until_ = -1;
  std::vector<std::pair<Lane, Bytes>> stalled_;
  std::array<std::uint64_t, kLaneCount> index_{};
  std::array<std::optional<Harness::EventId>, kLaneCount> held_{};
  ChannelStats stats_;
};

}  // namespace edgeplay::net
