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

#include "edgeplay/protocol/taxonomy.hpp"

namespace edgeplay::protocol {

std::string_view to_string(CommandClass c) {
  switch (c) {
    case CommandClass::StateIntent: return "StateIntent";
    case CommandClass::Snapshot: return "Snapshot";
    case CommandClass::Telemetry: return "Telemetry";
    case CommandClass::SignalingControl: return "SignalingControl";
  }
  return "Unknown";
}

const Taxonomy& Taxonomy::builtin() {
  static const Taxonomy table = [] {
    Taxonomy t;
    auto put = [&t](std::string_view type, CommandClass cls) { (void)t.add(std::string(type), cls); };
    using namespace types;
    put(kSceneLoad, CommandClass::StateIntent);
    put(kTrainingSetFlag, CommandClass::StateIntent);
    put(kPolicySwitch, CommandClass::StateIntent);
    put(kControlMove, CommandClass::Snapshot);
    for (auto s : {kTelemetryReward, kTelemetryEpisode, kTelemetryCurriculum, kTelemetryCoin, kSceneStatus,
                   kProtocolError}) {
      put(s, CommandClass::Telemetry);
    }
    for (auto s : {kSignalOffer, kSignalAnswer, kSignalCandidate, kSignalEndOfCandidates, kSignalCheck,
                   kSignalCheckAck, kSignalSelected, kRelayJoin, kRelayJoined, kRelayPeerJoined, kRelayPeerLeft,
                   kRelayError}) {
      put(s, CommandClass::SignalingControl);
    }
    return t;
  }();
  return table;
}

Result<void, ProtocolError> Taxonomy::add(std::string type, CommandClass cls) {
  if (!is_valid_type(type)) {
    return unexpected(ProtocolError{ProtocolErrc::InvalidEnvelope, "bad type string: " + type, {}});
  }
  auto [it, inserted] = table_.emplace(std::move(type), cls);
  if (!inserted) return unexpected(ProtocolError{ProtocolErrc::DuplicateType, it->first, {}});
  return {};
}

Result<CommandClass, ProtocolError> Taxonomy::classify(std::string_view type) const {
  auto it = table_.find(type);
  if (it == table_.end()) {
    return unexpected(ProtocolError{ProtocolErrc::UnknownType, std::string(type), {}});
  }
  return it->second;
}

bool Taxonomy::contains(std::string_view type) const { return table_.find(type) != table_.end(); }

Result<CommandClass, ProtocolError> classify(std::string_view type) { return Taxonomy::builtin().classify(type); }

CommandClass routing_class(std::string_view type) {
  auto r = classify(type);
  return r ? *r : CommandClass::StateIntent;
}

}  // namespace edgeplay::protocol
