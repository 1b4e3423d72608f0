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

#include <map>
#include <string>
#include <string_view>

#include "edgeplay/common/result.hpp"
#include "edgeplay/protocol/envelope.hpp"

namespace edgeplay::protocol {

enum class CommandClass {
  StateIntent,       // desired system state; idempotent, deduplicable
  Snapshot,          // continuous control; newest supersedes all earlier
  Telemetry,         // edge -> client observations
  SignalingControl,  // session establishment
};

std::string_view to_string(CommandClass c);

namespace types {
inline constexpr std::string_view kSceneLoad = "scene.load";
inline constexpr std::string_view kTrainingSetFlag = "training.set_flag";
inline constexpr std::string_view kPolicySwitch = "policy.switch";
inline constexpr std::string_view kControlMove = "control.move";
inline constexpr std::string_view kTelemetryReward = "telemetry.reward";
inline constexpr std::string_view kTelemetryEpisode = "telemetry.episode";
inline constexpr std::string_view kTelemetryCurriculum = "telemetry.curriculum";
inline constexpr std::string_view kTelemetryCoin = "telemetry.coin";
inline constexpr std::string_view kSceneStatus = "scene.status";
inline constexpr std::string_view kProtocolError = "protocol.error";
inline constexpr std::string_view kSignalOffer = "signal.offer";
inline constexpr std::string_view kSignalAnswer = "signal.answer";
inline constexpr std::string_view kSignalCandidate = "signal.candidate";
inline constexpr std::string_view kSignalEndOfCandidates = "signal.end_of_candidates";
inline constexpr std::string_view kSignalCheck = "signal.check";
inline constexpr std::string_view kSignalCheckAck = "signal.check_ack";
inline constexpr std::string_view kSignalSelected = "signal.selected";
inline constexpr std::string_view kRelayJoin = "relay.join";
inline constexpr std::string_view kRelayJoined = "relay.joined";
inline constexpr std::string_view kRelayPeerJoined = "relay.peer_joined";
inline constexpr std::string_view kRelayPeerLeft = "relay.peer_left";
inline constexpr std::string_view kRelayError = "relay.error";
}  // namespace types

/// Type string -> CommandClass. Classification is a pure function of the type
/// string once the table is built.
class Taxonomy {
 public:
  Taxonomy() = default;

  /// scene.load, training.set_flag, policy.switch -> StateIntent;
  /// control.move -> Snapshot; telemetry.*, scene.status, protocol.error ->
  /// Telemetry; signal.* and relay.* -> SignalingControl.
  static const Taxonomy& builtin();

  Result<void, ProtocolError> add(std::string type, CommandClass cls);
  Result<CommandClass, ProtocolError> classify(std::string_view type) const;
  bool contains(std::string_view type) const;

 private:
  std::map<std::string, CommandClass, std::less<>> table_;
};

/// classify() against the built-in taxonomy.
Result<CommandClass, ProtocolError> classify(std::string_view type);

/// Class used for routing decisions: unknown types fall back to StateIntent so
/// they are never superseded or coalesced away.
CommandClass routing_class(std::string_view type);

}  // namespace edgeplay::protocol
