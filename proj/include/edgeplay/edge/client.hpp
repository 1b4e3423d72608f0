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
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "edgeplay/common/clock.hpp"
#include "edgeplay/edge/jsonl.hpp"
#include "edgeplay/edge/script.hpp"
#include "edgeplay/stream/frame.hpp"
#include "edgeplay/transport/endpoint.hpp"

namespace edgeplay::edge {

struct ClientOptions {
  std::string session = "s1";
  Millis deadline_ms = 1000;
  Millis establish_timeout_ms = 10000;
  std::uint64_t seed = 0;
};

/// Scripted stand-in for the browser: joins the session as the initiator,
/// sends commands, and records every envelope and the seq of every frame it
/// displays.
class HeadlessClient {
 public:
  HeadlessClient(const Clock& clock, transport::Link& relay_link, ClientOptions opts,
                 std::shared_ptr<JsonlLog> telemetry_log = nullptr, std::shared_ptr<JsonlLog> frame_log = nullptr);

  void start() { endpoint_.start(); }
  void tick();
  bool connected() const { return endpoint_.connected(); }
  bool failed() const { return endpoint_.terminal() && !endpoint_.connected(); }
  transport::Endpoint& endpoint() { return endpoint_; }

  bool send(const ScriptStep& step);

  const std::vector<protocol::Envelope>& received() const { return received_; }
  const std::vector<std::uint32_t>& frame_seqs() const { return frame_seqs_; }
  std::set<std::string> types_seen() const;
  std::uint64_t frame_errors() const { return frame_errors_; }
  const stream::FrameReceiver& receiver() const { return receiver_; }

 private:
  const Clock& clock_;
  transport::Endpoint endpoint_;
  std::shared_ptr<JsonlLog> telemetry_log_, frame_log_;
  std::vector<protocol::Envelope> received_;
  std::vector<std::uint32_t> frame_seqs_;
  stream::FrameReceiver receiver_;
  std::uint64_t frame_errors_ = 0;
};

}  // namespace edgeplay::edge
