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
#include <memory>
#include <string>
#include <utility>

#include "edgeplay/net/harness.hpp"
#include "edgeplay/relay/relay.hpp"
#include "edgeplay/transport/link.hpp"

namespace edgeplay::net {

/// An endpoint's connection to a relay. The endpoint side is a Link; the
/// relay side is an Attachment.
class RelayPort {
 public:
  virtual ~RelayPort() = default;
  virtual transport::Link& link() = 0;
  virtual relay::Attachment& attachment() = 0;
};

/// Lossless, immediate connection to an in-process relay.
std::unique_ptr<RelayPort> connect_in_process(relay::Relay& relay, const Clock& clock);

/// Connection whose two directions pass through harness channels shaped by
/// profile. The link reports itself unreliable, so the transport adds its
/// ack/resend layer.
std::unique_ptr<RelayPort> connect_via_harness(relay::Relay& relay, Harness& harness, const NetProfile& profile,
                                               std::uint64_t stream);

/// Direct-path datagram network on the harness. Every ordered address pair
/// gets its own channel; all channels are blocked when the profile says the
/// direct path is blocked.
class HarnessDatagramNetwork {
 public:
  class Socket final : public transport::DatagramSocket {
   public:
    Socket(HarnessDatagramNetwork& net, std::string address, int priority);
    std::vector<transport::Candidate> local_candidates() const override { return {{address_, priority_}}; }
    bool send_to(const std::string& address, Lane lane, ByteView bytes) override;
    std::optional<transport::Datagram> receive() override { return inbox_.pop(); }
    bool reliable() const override { return false; }
    bool writable(const std::string& address) const override;

   private:
    friend class HarnessDatagramNetwork;
    HarnessDatagramNetwork& net_;
    std::string address_;
    int priority_;
    transport::Inbox<transport::Datagram> inbox_;
  };

  HarnessDatagramNetwork(Harness& harness, NetProfile profile) : harness_(harness), profile_(profile) {}

  std::unique_ptr<Socket> open(std::string address, int priority = 100);
  HarnessChannel& channel(const std::string& from, const std::string& to);
  /// Sum of channel stats over every pair.
  ChannelStats totals() const;

 private:
  Harness& harness_;
  NetProfile profile_;
  std::map<std::string, Socket*> sockets_;
  std::map<std::pair<std::string, std::string>, std::unique_ptr<HarnessChannel>> channels_;
};

}  // namespace edgeplay::net
