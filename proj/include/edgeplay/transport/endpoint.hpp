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
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/protocol/envelope.hpp"
#include "edgeplay/transport/arq.hpp"
#include "edgeplay/transport/buffers.hpp"
#include "edgeplay/transport/link.hpp"

namespace edgeplay::transport {

enum class Phase {
  Idle,
  Joining,
  ExchangingDescriptors,
  GatheringCandidates,
  Connecting,
  ConnectedDirect,
  ConnectedRelayed,
  Failed,
  Closed,
};

enum class Role { Initiator, Responder };

std::string_view to_string(Phase p);
std::string_view to_string(Role r);
std::optional<Role> role_from_string(std::string_view s);
/// True if the FSM may move from a to b.
bool legal_transition(Phase a, Phase b);

enum class TransportErrc {
  SessionClosed,
  BufferOverflow,
  InvalidEnvelope,
  InvalidFrame,
  NotConnected,
  SignalingUnreachable,
  EstablishTimeout,
  RoleTaken,
  RoomFull,
};

std::string_view to_string(TransportErrc c);

struct TransportError {
  TransportErrc code;
  std::string detail;
};

enum class SendStatus { Accepted, Buffered };

struct PhaseEvent {
  Phase phase;
  Millis at;
};

struct SessionState {
  Phase phase = Phase::Idle;
  std::string session_id;
  Role role = Role::Initiator;
  std::vector<Candidate> candidates_local;
  std::vector<Candidate> candidates_remote;
};

struct EndpointOptions {
  Role role = Role::Initiator;
  std::string session_id;
  std::string source = "edge";
  std::uint64_t seed = 0;
  /// Time from start() the initiator spends on direct checks before it
  /// selects the relayed path.
  Millis deadline_ms = 1000;
  /// Failure horizon beyond the deadline while the peer has not answered.
  /// 0 waits for a peer indefinitely (the edge, which serves one session).
  Millis establish_timeout_ms = 10000;
  /// Without relay.joined by then, the relay counts as unreachable.
  Millis join_timeout_ms = 3000;
  Millis join_retry_ms = 250;
  Millis check_interval_ms = 50;
  /// After the first verified pair, wait this long for better pairs.
  Millis check_window_ms = 30;
  std::size_t outbound_capacity = 256;
  bool coalesce_snapshots = true;
  std::size_t media_inbox_capacity = 64;
  ReliableLane::Options arq;
};

struct EndpointStats {
  /// Lane-2 payload messages and bytes this endpoint handed to the relay for
  /// forwarding to the peer. Relay-directed messages (join, leave) are not
  /// part of the transcript.
  std::uint64_t signaling_messages_sent = 0;
  std::uint64_t signaling_bytes_sent = 0;
  std::uint64_t control_sent = 0;
  std::uint64_t control_received = 0;
  std::uint64_t buffered = 0;
  std::uint64_t flushed = 0;
  std::uint64_t buffer_superseded = 0;
  std::uint64_t media_sent = 0;
  std::uint64_t media_dropped_stale = 0;
  std::uint64_t media_received = 0;
  std::uint64_t malformed_received = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t checks_sent = 0;
};

/// One side of a session: connection establishment, the reliable ordered
/// control channel, the best-effort media path, pre-open buffering and the
/// single-consumer inbound queue.
///
/// tick() drives all I/O and timers and must be called from one thread.
/// send() and send_media() may be called from any thread. poll_inbound() is
/// single-consumer.
class Endpoint {
 public:
  Endpoint(EndpointOptions opts, const Clock& clock, Link& relay, DatagramSocket* direct = nullptr);
  Endpoint(const Endpoint&) = delete;
  Endpoint& operator=(const Endpoint&) = delete;

  void start();
  void tick();
  void close();

  Phase phase() const { return phase_.load(); }
  bool connected() const;
  bool terminal() const;
  std::optional<TransportError> failure() const;
  std::vector<PhaseEvent> events() const;
  SessionState state() const;
  /// Remote address of the verified direct pair, once selected.
  std::optional<std::string> direct_peer() const;
  void set_phase_observer(std::function<void(const PhaseEvent&)> fn);

  Result<SendStatus, TransportError> send(protocol::Envelope env);
  Result<void, TransportError> send_media(Bytes frame);
  PollResult poll_inbound(std::size_t max);
  std::vector<Bytes> poll_media();

  protocol::IdGenerator& ids() { return ids_; }
  protocol::Envelope make(std::string type, nlohmann::json payload = nlohmann::json::object());
  EndpointStats stats() const;
  const EndpointOptions& options() const { return opts_; }
  InboundQueue& inbound() { return inbound_; }

 private:
  enum class Path { None, Relay, Direct };

  void set_phase(Phase p);
  void fail(TransportErrc code, std::string detail);
  void on_relay_packet(Packet pkt);
  void on_direct_datagram(Datagram dg);
  void on_relay_envelope(const protocol::Envelope& env);
  void on_signal(const protocol::Envelope& env);
  void on_data(Lane lane, ByteView bytes, Path path, const std::string& from);
  void on_envelope_bytes(ByteView bytes);
  void send_signal(const protocol::Envelope& env);
  void send_relay_directed(const protocol::Envelope& env);
  void send_local_candidates();
  void maybe_enter_connecting();
  void run_checks(Millis now);
  void select_direct(const std::string& remote);
  void select_relay();
  void become_connected(Path path, std::string remote);
  bool path_reliable(Path path) const;
  bool send_on_path(Path path, const std::string& remote, Lane lane, ByteView bytes);
  void send_control_locked(ByteView payload);
  void try_send_media_locked();
  void flush_observers();

  EndpointOptions opts_;
  const Clock& clock_;
  Link& relay_;
  DatagramSocket* direct_;
  protocol::IdGenerator ids_;

  mutable std::mutex mu_;
  std::atomic<Phase> phase_{Phase::Idle};
  std::vector<PhaseEvent> events_;
  std::vector<PhaseEvent> unobserved_;
  std::function<void(const PhaseEvent&)> observer_;
  std::optional<TransportError> failure_;

  Millis started_at_ = 0;
  Millis next_join_at_ = 0;
  bool answered_ = false;
  bool local_eoc_sent_ = false;
  bool remote_eoc_ = false;
  std::vector<Candidate> remote_candidates_;

  struct Check {
    Millis sent_at = 0;
    std::optional<Millis> rtt;
    int priority = 0;
  };
  std::map<std::string, Check> checks_;
  std::uint64_t next_txn_ = 1;
  std::map<std::uint64_t, std::pair<std::string, Millis>> outstanding_txn_;
  Millis next_check_at_ = 0;
  std::optional<Millis> first_verified_at_;
  std::set<std::string> trusted_;
  bool offer_sent_ = false;

  Path path_ = Path::None;
  std::string remote_address_;

  ReliableLane sig_arq_;
  ReliableLane ctl_arq_;
  OutboundBuffer outbound_;
  InboundQueue inbound_;
  std::optional<Bytes> media_slot_;
  std::deque<Bytes> media_inbox_;
  EndpointStats stats_;
};

/// Starts ep and pumps pump() plus ep.tick() until ep is connected or
/// terminal, or limit_ms passes on clock. pump advances the world: ticks the
/// peer, advances a virtual clock or sleeps.
Result<Phase, TransportError> establish(Endpoint& ep, const Clock& clock, Millis limit_ms,
                                        const std::function<void()>& pump);

}  // namespace edgeplay::transport
