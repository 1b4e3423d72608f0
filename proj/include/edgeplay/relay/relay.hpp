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
#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/lane.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/protocol/envelope.hpp"
#include "edgeplay/transport/endpoint.hpp"

namespace edgeplay::relay {

using transport::Role;

enum class RelayErrc { RoleTaken, RoomFull, PeerAbsent, Closed, UnknownRoom };

std::string_view to_string(RelayErrc c);

struct RelayError {
  RelayErrc code;
  std::string detail;
};

struct MemberToken {
  std::uint64_t id = 0;
  friend bool operator==(const MemberToken&, const MemberToken&) = default;
};

/// Per-lane counters. Lane 0 and 1 are the fallback control and media lanes;
/// lane 2 is signaling.
struct LaneCounters {
  std::array<std::uint64_t, kLaneCount> bytes{};
  std::array<std::uint64_t, kLaneCount> messages{};

  std::uint64_t fallback_bytes() const { return bytes[0] + bytes[1]; }
};

struct RoomStats {
  std::string session_id;
  Millis created_at = 0;
  Millis last_activity = 0;
  int members = 0;
  std::size_t buffered = 0;
  LaneCounters relayed;
};

struct GlobalStats {
  std::uint64_t rooms_open = 0;
  std::uint64_t rooms_created = 0;
  std::uint64_t rooms_expired = 0;
  std::uint64_t joins = 0;
  std::uint64_t rejected = 0;
  LaneCounters relayed;
};

/// Session-scoped message relay. Bytes are forwarded verbatim; the relay
/// only ever inspects lane-2 messages addressed to itself (see Attachment).
///
/// Mutating calls are serialized internally. stats() reads atomics only and
/// never blocks.
class Relay {
 public:
  struct Options {
    Millis room_ttl_ms = 10 * 60 * 1000;
    std::size_t signaling_buffer_cap = 64;
  };
  /// Receives bytes for one member.
  using Sink = std::function<void(Lane, ByteView)>;

  Relay() : Relay(Options{}) {}
  explicit Relay(Options opts) : opts_(opts) {}

  /// Registers a member. A present peer is told via on_peer_joined. Signaling
  /// buffered for the newcomer stays queued until release_pending().
  Result<MemberToken, RelayError> join(const std::string& session_id, Role role, Sink sink, Millis now,
                                       std::function<void()> on_peer_joined = {});
  /// Delivers signaling that was buffered while this member was absent.
  void release_pending(MemberToken token);
  Result<void, RelayError> forward(MemberToken token, Lane lane, ByteView bytes, Millis now);
  /// Removes the member; the peer's on_peer_left runs if set.
  void leave(MemberToken token, Millis now);
  void set_peer_left_hook(MemberToken token, std::function<void()> fn);

  /// Drops rooms idle for longer than the TTL. Returns the number removed.
  std::size_t expire(Millis now);

  GlobalStats stats() const;
  std::optional<RoomStats> room_stats(const std::string& session_id) const;
  std::vector<RoomStats> rooms() const;

  const Options& options() const { return opts_; }

 private:
  struct Member {
    std::uint64_t id = 0;
    Sink sink;
    std::function<void()> on_peer_joined;
    std::function<void()> on_peer_left;
  };
  struct Room {
    std::string session_id;
    Millis created_at = 0;
    Millis last_activity = 0;
    std::array<std::optional<Member>, 2> members;  // indexed by Role
    std::array<std::deque<Bytes>, 2> pending;      // lane-2 buffered for the absent role
    LaneCounters relayed;
  };
  struct Seat {
    std::string session_id;
    int role = 0;
  };

  void count(Room& room, Lane lane, std::size_t bytes);

  Options opts_;
  mutable std::mutex mu_;
  std::map<std::string, Room> rooms_;
  std::map<std::uint64_t, Seat> seats_;
  std::uint64_t next_member_ = 1;

  std::atomic<std::uint64_t> rooms_open_{0}, rooms_created_{0}, rooms_expired_{0}, joins_{0}, rejected_{0};
  std::array<std::atomic<std::uint64_t>, kLaneCount> bytes_{}, messages_{};
};

/// Per-connection protocol adapter shared by the socket server and the
/// in-process and harness bindings. Lane-2 envelopes of type relay.join and
/// relay.leave are consumed here and answered with relay.joined,
/// relay.peer_joined, relay.peer_left or relay.error; everything else is
/// forwarded for the joined member without inspection.
class Attachment {
 public:
  Attachment(Relay& relay, Relay::Sink to_member, const Clock& clock);
  ~Attachment();
  Attachment(const Attachment&) = delete;
  Attachment& operator=(const Attachment&) = delete;

  void on_packet(Lane lane, ByteView bytes);
  void detach();

  bool joined() const { return token_.has_value(); }
  std::uint64_t forward_errors() const { return forward_errors_; }

 private:
  void reply(const std::string& type, nlohmann::json payload);

  Relay& relay_;
  Relay::Sink to_member_;
  const Clock& clock_;
  std::optional<MemberToken> token_;
  std::string session_;
  Role role_ = Role::Initiator;
  protocol::IdGenerator ids_{"relay"};
  std::uint64_t forward_errors_ = 0;
};

}  // namespace edgeplay::relay
