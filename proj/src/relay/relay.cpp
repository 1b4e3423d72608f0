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

#include "edgeplay/relay/relay.hpp"

#include "edgeplay/protocol/taxonomy.hpp"

namespace edgeplay::relay {

namespace types = protocol::types;

std::string_view to_string(RelayErrc c) {
  switch (c) {
    case RelayErrc::RoleTaken: return "RoleTaken";
    case RelayErrc::RoomFull: return "RoomFull";
    case RelayErrc::PeerAbsent: return "PeerAbsent";
    case RelayErrc::Closed: return "Closed";
    case RelayErrc::UnknownRoom: return "UnknownRoom";
  }
  return "Unknown";
}

namespace {
int role_index(Role r) { return r == Role::Initiator ? 0 : 1; }
}  // namespace

Result<MemberToken, RelayError> Relay::join(const std::string& session_id, Role role, Sink sink, Millis now,
                                            std::function<void()> on_peer_joined) {
  std::function<void()> notify_peer;
  MemberToken token;
  {
    std::lock_guard lock(mu_);
    auto [it, created] = rooms_.try_emplace(session_id);
    Room& room = it->second;
    if (created) {
      room.session_id = session_id;
      room.created_at = now;
      rooms_created_.fetch_add(1);
      rooms_open_.fetch_add(1);
    }
    const int r = role_index(role);
    if (room.members[r]) {
      rejected_.fetch_add(1);
      const bool full = room.members[1 - r].has_value();
      return unexpected(RelayError{full ? RelayErrc::RoomFull : RelayErrc::RoleTaken, session_id});
    }
    token.id = next_member_++;
    room.members[r] = Member{token.id, std::move(sink), std::move(on_peer_joined), {}};
    room.last_activity = now;
    seats_[token.id] = Seat{session_id, r};
    joins_.fetch_add(1);
    if (room.members[1 - r]) notify_peer = room.members[1 - r]->on_peer_joined;
  }
  if (notify_peer) notify_peer();
  return token;
}

void Relay::release_pending(MemberToken token) {
  std::vector<Bytes> replay;
  Sink sink;
  {
    std::lock_guard lock(mu_);
    auto seat = seats_.find(token.id);
    if (seat == seats_.end()) return;
    auto room_it = rooms_.find(seat->second.session_id);
    if (room_it == rooms_.end()) return;
    Room& room = room_it->second;
    const int r = seat->second.role;
    for (auto& msg : room.pending[r]) {
      count(room, Lane::Signaling, msg.size());
      replay.push_back(std::move(msg));
    }
    room.pending[r].clear();
    sink = room.members[r]->sink;
  }
  for (auto& msg : replay) sink(Lane::Signaling, msg);
}

void Relay::count(Room& room, Lane lane, std::size_t n) {
  const auto li = index_of(lane);
  room.relayed.bytes[li] += n;
  room.relayed.messages[li] += 1;
  bytes_[li].fetch_add(n, std::memory_order_relaxed);
  messages_[li].fetch_add(1, std::memory_order_relaxed);
}

Result<void, RelayError> Relay::forward(MemberToken token, Lane lane, ByteView bytes, Millis now) {
  Sink target;
  {
    std::lock_guard lock(mu_);
    auto seat = seats_.find(token.id);
    if (seat == seats_.end()) return unexpected(RelayError{RelayErrc::Closed, "unknown member"});
    auto room_it = rooms_.find(seat->second.session_id);
    if (room_it == rooms_.end()) return unexpected(RelayError{RelayErrc::Closed, "room expired"});
    Room& room = room_it->second;
    room.last_activity = now;
    const int peer = 1 - seat->second.role;
    if (!room.members[peer]) {
      if (lane != Lane::Signaling || room.pending[peer].size() >= opts_.signaling_buffer_cap) {
        return unexpected(RelayError{RelayErrc::PeerAbsent, room.session_id});
      }
      room.pending[peer].emplace_back(bytes.begin(), bytes.end());
      return {};
    }
    count(room, lane, bytes.size());
    target = room.members[peer]->sink;
  }
  target(lane, bytes);
  return {};
}

void Relay::set_peer_left_hook(MemberToken token, std::function<void()> fn) {
  std::lock_guard lock(mu_);
  auto seat = seats_.find(token.id);
  if (seat == seats_.end()) return;
  auto room_it = rooms_.find(seat->second.session_id);
  if (room_it == rooms_.end()) return;
  if (auto& m = room_it->second.members[seat->second.role]) m->on_peer_left = std::move(fn);
}

void Relay::leave(MemberToken token, Millis now) {
  std::function<void()> notify;
  {
    std::lock_guard lock(mu_);
    auto seat = seats_.find(token.id);
    if (seat == seats_.end()) return;
    auto room_it = rooms_.find(seat->second.session_id);
    if (room_it != rooms_.end()) {
      Room& room = room_it->second;
      room.members[seat->second.role].reset();
      room.last_activity = now;
      if (auto& peer = room.members[1 - seat->second.role]) notify = peer->on_peer_left;
    }
    seats_.erase(seat);
  }
  if (notify) notify();
}

std::size_t Relay::expire(Millis now) {
  std::lock_guard lock(mu_);
  std::size_t removed = 0;
  for (auto it = rooms_.begin(); it != rooms_.end();) {
    if (now - it->second.last_activity < opts_.room_ttl_ms) {
      ++it;
      continue;
    }
    for (auto& m : it->second.members) {
      if (m) seats_.erase(m->id);
    }
    it = rooms_.erase(it);
    ++removed;
  }
  rooms_open_.fetch_sub(removed);
  rooms_expired_.fetch_add(removed);
  return removed;
}

GlobalStats Relay::stats() const {
  GlobalStats s;
  s.rooms_open = rooms_open_.load();
  s.rooms_created = rooms_created_.load();
  s.rooms_expired = rooms_expired_.load();
  s.joins = joins_.load();
  s.rejected = rejected_.load();
  for (std::size_t i = 0; i < kLaneCount; ++i) {
    s.relayed.bytes[i] = bytes_[i].load(std::memory_order_relaxed);
    s.relayed.messages[i] = messages_[i].load(std::memory_order_relaxed);
  }
  return s;
}

std::optional<RoomStats> Relay::room_stats(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = rooms_.find(session_id);
  if (it == rooms_.end()) return std::nullopt;
  const Room& room = it->second;
  RoomStats s;
  s.session_id = room.session_id;
  s.created_at = room.created_at;
  s.last_activity = room.last_activity;
  s.members = static_cast<int>(room.members[0].has_value()) + static_cast<int>(room.members[1].has_value());
  s.buffered = room.pending[0].size() + room.pending[1].size();
  s.relayed = room.relayed;
  return s;
}

std::vector<RoomStats> Relay::rooms() const {
  std::vector<std::string> names;
  {
    std::lock_guard lock(mu_);
    for (auto& [name, _] : rooms_) names.push_back(name);
  }
  std::vector<RoomStats> out;
  for (auto& n : names) {
    if (auto s = room_stats(n)) out.push_back(*s);
  }
  return out;
}

Attachment::Attachment(Relay& relay, Relay::Sink to_member, const Clock& clock)
    : relay_(relay), to_member_(std::move(to_member)), clock_(clock) {}

Attachment::~Attachment() { detach(); }

void Attachment::reply(const std::string& type, nlohmann::json payload) {
  auto env = protocol::make_envelope(ids_, type, std::move(payload));
  to_member_(Lane::Signaling, to_bytes(*protocol::encode(env)));
}

void Attachment::detach() {
  if (!token_) return;
  relay_.leave(*token_, clock_.now_ms());
  token_.reset();
}

void Attachment::on_packet(Lane lane, ByteView bytes) {
  if (lane == Lane::Signaling && !bytes.empty() && bytes[0] == '{') {
    auto env = protocol::decode(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    if (env && env->type.rfind("relay.", 0) == 0) {
      if (env->type == types::kRelayJoin) {
        const std::string session = env->payload.value("session", "");
        auto role = transport::role_from_string(env->payload.value("role", ""));
        if (token_) {
          // Retried join whose reply was lost.
          if (session == session_ && role && *role == role_) reply(std::string(types::kRelayJoined), {{"session", session}});
          else reply(std::string(types::kRelayError), {{"code", "AlreadyJoined"}});
          return;
        }
        if (session.empty() || !role) {
          reply(std::string(types::kRelayError), {{"code", "BadJoin"}});
          return;
        }
        auto r = relay_.join(session, *role, to_member_, clock_.now_ms(), [this, session] {
          reply(std::string(types::kRelayPeerJoined), {{"session", session}});
        });
        if (!r) {
          reply(std::string(types::kRelayError), {{"code", to_string(r.error().code)}, {"session", session}});
          return;
        }
        token_ = *r;
        session_ = session;
        role_ = *role;
        relay_.set_peer_left_hook(*token_, [this, session] {
          reply(std::string(types::kRelayPeerLeft), {{"session", session}});
        });
        reply(std::string(types::kRelayJoined), {{"session", session}, {"role", transport::to_string(role_)}});
        relay_.release_pending(*token_);
      } else if (env->type == "relay.leave") {
        detach();
      }
      return;
    }
  }
  if (!token_) {
    ++forward_errors_;
    return;
  }
  if (!relay_.forward(*token_, lane, bytes, clock_.now_ms())) ++forward_errors_;
}

}  // namespace edgeplay::relay
