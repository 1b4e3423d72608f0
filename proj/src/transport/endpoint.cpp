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

#include "edgeplay/transport/endpoint.hpp"

#include <algorithm>
#include <cassert>
#include <tuple>

#include "edgeplay/protocol/taxonomy.hpp"

namespace edgeplay::transport {

using nlohmann::json;
using protocol::Envelope;
namespace types = protocol::types;

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Joining: return "Joining";
    case Phase::ExchangingDescriptors: return "ExchangingDescriptors";
    case Phase::GatheringCandidates: return "GatheringCandidates";
    case Phase::Connecting: return "Connecting";
    case Phase::ConnectedDirect: return "ConnectedDirect";
    case Phase::ConnectedRelayed: return "ConnectedRelayed";
    case Phase::Failed: return "Failed";
    case Phase::Closed: return "Closed";
  }
  return "Unknown";
}

std::string_view to_string(Role r) { return r == Role::Initiator ? "initiator" : "responder"; }

std::optional<Role> role_from_string(std::string_view s) {
  if (s == "initiator") return Role::Initiator;
  if (s == "responder") return Role::Responder;
  return std::nullopt;
}

std::string_view to_string(TransportErrc c) {
  switch (c) {
    case TransportErrc::SessionClosed: return "SessionClosed";
    case TransportErrc::BufferOverflow: return "BufferOverflow";
    case TransportErrc::InvalidEnvelope: return "InvalidEnvelope";
    case TransportErrc::InvalidFrame: return "InvalidFrame";
    case TransportErrc::NotConnected: return "NotConnected";
    case TransportErrc::SignalingUnreachable: return "SignalingUnreachable";
    case TransportErrc::EstablishTimeout: return "EstablishTimeout";
    case TransportErrc::RoleTaken: return "RoleTaken";
    case TransportErrc::RoomFull: return "RoomFull";
  }
  return "Unknown";
}

bool legal_transition(Phase a, Phase b) {
  if (b == Phase::Closed) return a != Phase::Closed;
  if (b == Phase::Failed) return a != Phase::Failed && a != Phase::Closed && a != Phase::ConnectedDirect &&
                                 a != Phase::ConnectedRelayed;
  switch (a) {
    case Phase::Idle: return b == Phase::Joining;
    case Phase::Joining: return b == Phase::ExchangingDescriptors;
    case Phase::ExchangingDescriptors: return b == Phase::GatheringCandidates;
    case Phase::GatheringCandidates: return b == Phase::Connecting;
    case Phase::Connecting: return b == Phase::ConnectedDirect || b == Phase::ConnectedRelayed;
    default: return false;
  }
}

namespace {

bool is_connected(Phase p) { return p == Phase::ConnectedDirect || p == Phase::ConnectedRelayed; }
bool is_terminal(Phase p) { return p == Phase::Failed || p == Phase::Closed; }

std::optional<Envelope> decode_raw(ByteView bytes) {
  if (bytes.empty() || bytes[0] != '{') return std::nullopt;
  auto r = protocol::decode(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  if (!r) return std::nullopt;
  return std::move(*r);
}

Bytes encoded(const Envelope& env) { return to_bytes(*protocol::encode(env)); }

}  // namespace

Endpoint::Endpoint(EndpointOptions opts, const Clock& clock, Link& relay, DatagramSocket* direct)
    : opts_(std::move(opts)),
      clock_(clock),
      relay_(relay),
      direct_(direct),
      ids_(opts_.source, opts_.seed),
      sig_arq_(opts_.arq),
      ctl_arq_(opts_.arq),
      outbound_(opts_.outbound_capacity),
      inbound_(opts_.coalesce_snapshots) {}

Envelope Endpoint::make(std::string type, json payload) {
  return protocol::make_envelope(ids_, std::move(type), std::move(payload));
}

bool Endpoint::connected() const { return is_connected(phase()); }
bool Endpoint::terminal() const { return is_terminal(phase()); }

std::optional<TransportError> Endpoint::failure() const {
  std::lock_guard lock(mu_);
  return failure_;
}

std::vector<PhaseEvent> Endpoint::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

SessionState Endpoint::state() const {
  std::lock_guard lock(mu_);
  SessionState s;
  s.phase = phase_.load();
  s.session_id = opts_.session_id;
  s.role = opts_.role;
  if (direct_) s.candidates_local = direct_->local_candidates();
  s.candidates_remote = remote_candidates_;
  return s;
}

std::optional<std::string> Endpoint::direct_peer() const {
  std::lock_guard lock(mu_);
  if (path_ != Path::Direct) return std::nullopt;
  return remote_address_;
}

EndpointStats Endpoint::stats() const {
  std::lock_guard lock(mu_);
  auto s = stats_;
  s.retransmissions = sig_arq_.retransmissions() + ctl_arq_.retransmissions();
  return s;
}

void Endpoint::set_phase_observer(std::function<void(const PhaseEvent&)> fn) {
  std::lock_guard lock(mu_);
  observer_ = std::move(fn);
}

void Endpoint::set_phase(Phase p) {
  const Phase cur = phase_.load();
  if (cur == p) return;
  if (!legal_transition(cur, p)) {
    assert(false && "illegal session phase transition");
    return;
  }
  phase_.store(p);
  PhaseEvent ev{p, clock_.now_ms()};
  events_.push_back(ev);
  unobserved_.push_back(ev);
}

void Endpoint::fail(TransportErrc code, std::string detail) {
  if (is_terminal(phase()) || is_connected(phase())) return;
  failure_ = TransportError{code, std::move(detail)};
  set_phase(Phase::Failed);
}

void Endpoint::flush_observers() {
  std::vector<PhaseEvent> pending;
  std::function<void(const PhaseEvent&)> observer;
  {
    std::lock_guard lock(mu_);
    pending.swap(unobserved_);
    observer = observer_;
  }
  if (observer) {
    for (const auto& ev : pending) observer(ev);
  }
}

void Endpoint::start() {
  {
    std::lock_guard lock(mu_);
    if (phase() != Phase::Idle) return;
    started_at_ = clock_.now_ms();
    next_join_at_ = started_at_;
    set_phase(Phase::Joining);
    if (!relay_.is_open()) fail(TransportErrc::SignalingUnreachable, "relay link is not open");
  }
  flush_observers();
}

void Endpoint::send_relay_directed(const Envelope& env) { relay_.send(Lane::Signaling, encoded(env)); }

void Endpoint::send_signal(const Envelope& env) {
  Bytes payload = encoded(env);
  if (!relay_.reliable()) payload = sig_arq_.wrap(payload, clock_.now_ms());
  stats_.signaling_messages_sent += 1;
  stats_.signaling_bytes_sent += payload.size();
  relay_.send(Lane::Signaling, payload);
}

void Endpoint::send_local_candidates() {
  if (direct_) {
    for (const auto& c : direct_->local_candidates()) {
      send_signal(make(std::string(types::kSignalCandidate), {{"address", c.address}, {"priority", c.priority}}));
    }
  }
  send_signal(make(std::string(types::kSignalEndOfCandidates)));
  local_eoc_sent_ = true;
}

void Endpoint::maybe_enter_connecting() {
  if (phase() != Phase::GatheringCandidates || !local_eoc_sent_ || !remote_eoc_) return;
  set_phase(Phase::Connecting);
  next_check_at_ = clock_.now_ms();
  if (opts_.role == Role::Initiator && (!direct_ || remote_candidates_.empty() || direct_->local_candidates().empty())) {
    // No candidate pair exists, so direct attempts are exhausted at once.
    select_relay();
  }
}

void Endpoint::tick() {
  {
    std::lock_guard lock(mu_);
    const Millis now = clock_.now_ms();
    const Phase cur = phase();
    if (cur == Phase::Idle || is_terminal(cur)) {
      while (relay_.receive()) {
      }
      if (direct_) {
        while (direct_->receive()) {
        }
      }
    } else {
      while (auto pkt = relay_.receive()) on_relay_packet(std::move(*pkt));
      if (direct_) {
        while (auto dg = direct_->receive()) on_direct_datagram(std::move(*dg));
      }

      if (phase() == Phase::Joining) {
        if (!relay_.is_open()) {
          fail(TransportErrc::SignalingUnreachable, "relay link closed");
        } else if (now - started_at_ >= opts_.join_timeout_ms) {
          fail(TransportErrc::SignalingUnreachable, "no relay.joined within join timeout");
        } else if (now >= next_join_at_) {
          send_relay_directed(make(std::string(types::kRelayJoin),
                                   {{"session", opts_.session_id}, {"role", to_string(opts_.role)}}));
          next_join_at_ = now + opts_.join_retry_ms;
        }
      }

      if (!is_terminal(phase())) {
        if (!relay_.reliable()) {
          for (auto& frame : sig_arq_.due(now)) {
            stats_.signaling_messages_sent += 1;
            stats_.signaling_bytes_sent += frame.size();
            relay_.send(Lane::Signaling, frame);
          }
        }
        if (path_ != Path::None && !path_reliable(path_)) {
          for (auto& frame : ctl_arq_.due(now)) send_on_path(path_, remote_address_, Lane::Control, frame);
        }
      }

      if (opts_.role == Role::Initiator && phase() == Phase::Connecting) run_checks(now);

      if (opts_.role == Role::Initiator && !connected() && !is_terminal(phase()) && answered_ &&
          !first_verified_at_ && now - started_at_ >= opts_.deadline_ms) {
        select_relay();
      }

      if (!connected() && !is_terminal(phase()) && phase() != Phase::Joining && opts_.establish_timeout_ms > 0 &&
          now - started_at_ >= opts_.deadline_ms + opts_.establish_timeout_ms) {
        fail(TransportErrc::EstablishTimeout, "peer did not complete establishment");
      }

      if (connected()) try_send_media_locked();
    }
  }
  flush_observers();
}

void Endpoint::on_relay_packet(Packet pkt) {
  if (pkt.lane == Lane::Signaling) {
    if (auto env = decode_raw(pkt.data)) {
      if (env->type.rfind("relay.", 0) == 0) {
        on_relay_envelope(*env);
      } else if (relay_.reliable()) {
        on_signal(*env);
      }
      return;
    }
    if (relay_.reliable()) {
      ++stats_.malformed_received;
      return;
    }
    auto in = sig_arq_.on_frame(pkt.data);
    if (in.malformed) {
      ++stats_.malformed_received;
      return;
    }
    if (in.ack) {
      stats_.signaling_messages_sent += 1;
      stats_.signaling_bytes_sent += in.ack->size();
      relay_.send(Lane::Signaling, *in.ack);
    }
    for (auto& payload : in.delivered) {
      if (auto env = decode_raw(payload)) on_signal(*env);
      else ++stats_.malformed_received;
    }
    return;
  }
  on_data(pkt.lane, pkt.data, Path::Relay, {});
}

void Endpoint::on_relay_envelope(const Envelope& env) {
  if (env.type == types::kRelayJoined) {
    if (phase() == Phase::Joining) set_phase(Phase::ExchangingDescriptors);
    if (opts_.role == Role::Initiator && !offer_sent_ && phase() == Phase::ExchangingDescriptors) {
      offer_sent_ = true;
      send_signal(make(std::string(types::kSignalOffer),
                       {{"session", opts_.session_id}, {"lanes", {"control", "media", "signaling"}}}));
    }
  } else if (env.type == types::kRelayError) {
    const std::string code = env.payload.value("code", "");
    if (code == "RoleTaken") fail(TransportErrc::RoleTaken, code);
    else if (code == "RoomFull") fail(TransportErrc::RoomFull, code);
    else if (phase() == Phase::Joining) fail(TransportErrc::SignalingUnreachable, code);
  }
}

void Endpoint::on_signal(const Envelope& env) {
  const auto& t = env.type;
  if (t == types::kSignalOffer) {
    if (opts_.role != Role::Responder || answered_) return;
    if (phase() == Phase::Joining) set_phase(Phase::ExchangingDescriptors);
    if (phase() != Phase::ExchangingDescriptors) return;
    answered_ = true;
    send_signal(make(std::string(types::kSignalAnswer),
                     {{"session", opts_.session_id}, {"lanes", {"control", "media", "signaling"}}}));
    set_phase(Phase::GatheringCandidates);
    send_local_candidates();
    maybe_enter_connecting();
  } else if (t == types::kSignalAnswer) {
    if (opts_.role != Role::Initiator || answered_ || phase() != Phase::ExchangingDescriptors) return;
    answered_ = true;
    set_phase(Phase::GatheringCandidates);
    send_local_candidates();
    maybe_enter_connecting();
  } else if (t == types::kSignalCandidate) {
    Candidate c{env.payload.value("address", ""), env.payload.value("priority", 0)};
    if (!c.address.empty() && std::find(remote_candidates_.begin(), remote_candidates_.end(), c) ==
                                  remote_candidates_.end()) {
      remote_candidates_.push_back(c);
    }
  } else if (t == types::kSignalEndOfCandidates) {
    remote_eoc_ = true;
    maybe_enter_connecting();
  } else if (t == types::kSignalSelected) {
    if (opts_.role != Role::Responder || connected()) return;
    const std::string path = env.payload.value("path", "");
    if (phase() == Phase::GatheringCandidates) set_phase(Phase::Connecting);
    if (phase() != Phase::Connecting) return;
    if (path == "direct") {
      const std::string remote = env.payload.value("initiator", "");
      trusted_.insert(remote);
      become_connected(Path::Direct, remote);
    } else {
      become_connected(Path::Relay, {});
    }
  } else if (t == "signal.bye") {
    if (phase() != Phase::Closed) set_phase(Phase::Closed);
  }
}

void Endpoint::on_direct_datagram(Datagram dg) {
  if (dg.lane == Lane::Signaling) {
    auto env = decode_raw(dg.data);
    if (!env) return;
    if (env->type == types::kSignalCheck) {
      if (env->payload.value("session", "") != opts_.session_id) return;
      trusted_.insert(dg.from);
      auto ack = make(std::string(types::kSignalCheckAck), {{"txn", env->payload.value("txn", 0)}});
      direct_->send_to(dg.from, Lane::Signaling, encoded(ack));
    } else if (env->type == types::kSignalCheckAck) {
      auto txn = env->payload.value("txn", std::uint64_t{0});
      auto it = outstanding_txn_.find(txn);
      if (it == outstanding_txn_.end() || it->second.first != dg.from) return;
      const Millis now = clock_.now_ms();
      auto& check = checks_[dg.from];
      Millis rtt = now - it->second.second;
      check.rtt = check.rtt ? std::min(*check.rtt, rtt) : rtt;
      trusted_.insert(dg.from);
      if (!first_verified_at_) first_verified_at_ = now;
      outstanding_txn_.erase(it);
    }
    return;
  }
  if (!trusted_.count(dg.from)) return;
  on_data(dg.lane, dg.data, Path::Direct, dg.from);
}

void Endpoint::run_checks(Millis now) {
  if (!direct_) return;
  if (now >= next_check_at_) {
    for (const auto& c : remote_candidates_) {
      auto& check = checks_[c.address];
      check.priority = c.priority;
      if (check.rtt) continue;
      const std::uint64_t txn = next_txn_++;
      outstanding_txn_[txn] = {c.address, now};
      check.sent_at = now;
      ++stats_.checks_sent;
      direct_->send_to(c.address, Lane::Signaling,
                       encoded(make(std::string(types::kSignalCheck), {{"session", opts_.session_id}, {"txn", txn}})));
    }
    next_check_at_ = now + opts_.check_interval_ms;
  }
  if (!first_verified_at_) return;
  const bool all_verified = std::all_of(remote_candidates_.begin(), remote_candidates_.end(),
                                        [&](const Candidate& c) { return checks_[c.address].rtt.has_value(); });
  if (!all_verified && now - *first_verified_at_ < opts_.check_window_ms) return;
  // Highest priority, then lowest RTT, then lexicographically smallest address.
  const std::string* best = nullptr;
  std::tuple<int, Millis> best_key{};
  for (const auto& [addr, check] : checks_) {
    if (!check.rtt) continue;
    std::tuple<int, Millis> key{-check.priority, *check.rtt};
    if (!best || key < best_key) {
      best = &addr;
      best_key = key;
    }
  }
  if (best) select_direct(*best);
}

void Endpoint::select_direct(const std::string& remote) {
  std::string local = direct_->local_candidates().front().address;
  send_signal(make(std::string(types::kSignalSelected),
                   {{"path", "direct"}, {"initiator", local}, {"responder", remote}}));
  become_connected(Path::Direct, remote);
}

void Endpoint::select_relay() {
  if (phase() == Phase::GatheringCandidates) set_phase(Phase::Connecting);
  if (phase() != Phase::Connecting) return;
  send_signal(make(std::string(types::kSignalSelected), {{"path", "relay"}}));
  become_connected(Path::Relay, {});
}

void Endpoint::become_connected(Path path, std::string remote) {
  path_ = path;
  remote_address_ = std::move(remote);
  set_phase(path == Path::Direct ? Phase::ConnectedDirect : Phase::ConnectedRelayed);
  // Flush under the same lock that send() takes, so no post-open send can
  // slip between two buffered envelopes.
  for (auto& env : outbound_.take_all()) {
    send_control_locked(encoded(env));
    ++stats_.flushed;
    ++stats_.control_sent;
  }
}

bool Endpoint::path_reliable(Path path) const {
  if (path == Path::Direct) return direct_ && direct_->reliable();
  return relay_.reliable();
}

bool Endpoint::send_on_path(Path path, const std::string& remote, Lane lane, ByteView bytes) {
  if (path == Path::Direct) return direct_ && direct_->send_to(remote, lane, bytes);
  return relay_.send(lane, bytes);
}

void Endpoint::send_control_locked(ByteView payload) {
  if (path_reliable(path_)) {
    send_on_path(path_, remote_address_, Lane::Control, payload);
  } else {
    auto frame = ctl_arq_.wrap(payload, clock_.now_ms());
    send_on_path(path_, remote_address_, Lane::Control, frame);
  }
}

void Endpoint::on_data(Lane lane, ByteView bytes, Path path, const std::string& from) {
  if (lane == Lane::Media) {
    ++stats_.media_received;
    media_inbox_.emplace_back(bytes.begin(), bytes.end());
    while (media_inbox_.size() > opts_.media_inbox_capacity) media_inbox_.pop_front();
    return;
  }
  if (lane != Lane::Control) return;
  if (path_reliable(path)) {
    on_envelope_bytes(bytes);
    return;
  }
  auto in = ctl_arq_.on_frame(bytes);
  if (in.malformed) {
    ++stats_.malformed_received;
    return;
  }
  if (in.ack) send_on_path(path, from, Lane::Control, *in.ack);
  for (auto& payload : in.delivered) on_envelope_bytes(payload);
}

void Endpoint::on_envelope_bytes(ByteView bytes) {
  auto env = protocol::decode(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  if (env) {
    ++stats_.control_received;
    inbound_.push(std::move(*env));
    return;
  }
  ++stats_.malformed_received;
  if (connected()) {
    auto reply = protocol::make_error_envelope(ids_, env.error());
    send_control_locked(encoded(reply));
    ++stats_.control_sent;
  }
}

Result<SendStatus, TransportError> Endpoint::send(Envelope env) {
  std::lock_guard lock(mu_);
  if (is_terminal(phase())) return unexpected(TransportError{TransportErrc::SessionClosed, "session closed"});
  auto text = protocol::encode(env);
  if (!text) return unexpected(TransportError{TransportErrc::InvalidEnvelope, text.error().detail});
  if (connected()) {
    send_control_locked(to_bytes(*text));
    ++stats_.control_sent;
    return SendStatus::Accepted;
  }
  const auto cls = protocol::routing_class(env.type);
  switch (outbound_.push(std::move(env), cls)) {
    case BufferPush::Overflow:
      return unexpected(TransportError{TransportErrc::BufferOverflow, "outbound buffer full"});
    case BufferPush::Superseded:
      ++stats_.buffer_superseded;
      break;
    case BufferPush::Appended:
      break;
  }
  ++stats_.buffered;
  return SendStatus::Buffered;
}

Result<void, TransportError> Endpoint::send_media(Bytes frame) {
  if (frame.empty()) return unexpected(TransportError{TransportErrc::InvalidFrame, "empty frame"});
  std::lock_guard lock(mu_);
  if (is_terminal(phase())) return unexpected(TransportError{TransportErrc::SessionClosed, "session closed"});
  if (!connected()) return unexpected(TransportError{TransportErrc::NotConnected, "media path not open"});
  if (media_slot_) ++stats_.media_dropped_stale;
  media_slot_ = std::move(frame);
  try_send_media_locked();
  return {};
}

void Endpoint::try_send_media_locked() {
  if (!media_slot_) return;
  const bool writable = path_ == Path::Direct ? direct_->writable(remote_address_) : relay_.writable();
  if (!writable) return;
  send_on_path(path_, remote_address_, Lane::Media, *media_slot_);
  media_slot_.reset();
  ++stats_.media_sent;
}

PollResult Endpoint::poll_inbound(std::size_t max) { return inbound_.poll(max); }

std::vector<Bytes> Endpoint::poll_media() {
  std::lock_guard lock(mu_);
  std::vector<Bytes> out(std::make_move_iterator(media_inbox_.begin()), std::make_move_iterator(media_inbox_.end()));
  media_inbox_.clear();
  return out;
}

void Endpoint::close() {
  {
    std::lock_guard lock(mu_);
    if (phase() == Phase::Closed) return;
    if (relay_.is_open() && phase() != Phase::Idle) {
      if (!is_terminal(phase()) && phase() != Phase::Joining) send_signal(make("signal.bye"));
      send_relay_directed(make("relay.leave", {{"session", opts_.session_id}}));
    }
    set_phase(Phase::Closed);
  }
  flush_observers();
}

Result<Phase, TransportError> establish(Endpoint& ep, const Clock& clock, Millis limit_ms,
                                        const std::function<void()>& pump) {
  const Millis t0 = clock.now_ms();
  ep.start();
  while (true) {
    ep.tick();
    if (ep.connected()) return ep.phase();
    if (ep.terminal()) {
      auto f = ep.failure();
      return unexpected(f ? *f : TransportError{TransportErrc::SessionClosed, "closed during establishment"});
    }
    if (clock.now_ms() - t0 > limit_ms) {
      return unexpected(TransportError{TransportErrc::EstablishTimeout, "establish limit reached"});
    }
    if (pump) pump();
  }
}

}  // namespace edgeplay::transport
