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

#include "edgeplay/net/bindings.hpp"

#include <functional>

namespace edgeplay::net {

using transport::QueueLink;

namespace {

class InProcessPort final : public RelayPort {
 public:
  InProcessPort(relay::Relay& relay, const Clock& clock)
      : link_([this](Lane lane, ByteView bytes) {
                  attachment_->on_packet(lane, bytes);
                  return true;
                },
                true),
        attachment_(std::make_unique<relay::Attachment>(
            relay, [this](Lane lane, ByteView bytes) { link_.deliver(lane, Bytes(bytes.begin(), bytes.end())); },
            clock)) {}

  transport::Link& link() override { return link_; }
  relay::Attachment& attachment() override { return *attachment_; }

 private:
  QueueLink link_;
  std::unique_ptr<relay::Attachment> attachment_;
};

class HarnessPort final : public RelayPort {
 public:
  HarnessPort(relay::Relay& relay, Harness& harness, const NetProfile& profile, std::uint64_t stream)
      : up_(harness, profile, stream * 2,
            [this](Lane lane, Bytes bytes) { attachment_->on_packet(lane, bytes); }),
        down_(harness, profile, stream * 2 + 1,
              [this](Lane lane, Bytes bytes) { link_.deliver(lane, std::move(bytes)); }),
        link_([this](Lane lane, ByteView bytes) {
                up_.send(lane, bytes);
                return true;
              },
              false, [this] { return up_.writable(); }),
        attachment_(std::make_unique<relay::Attachment>(
            relay, [this](Lane lane, ByteView bytes) { down_.send(lane, bytes); }, harness.clock())) {}

  transport::Link& link() override { return link_; }
  relay::Attachment& attachment() override { return *attachment_; }

 private:
  HarnessChannel up_;
  HarnessChannel down_;
  QueueLink link_;
  std::unique_ptr<relay::Attachment> attachment_;
};

}  // namespace

std::unique_ptr<RelayPort> connect_in_process(relay::Relay& relay, const Clock& clock) {
  return std::make_unique<InProcessPort>(relay, clock);
}

std::unique_ptr<RelayPort> connect_via_harness(relay::Relay& relay, Harness& harness, const NetProfile& profile,
                                               std::uint64_t stream) {
  return std::make_unique<HarnessPort>(relay, harness, profile, stream);
}

HarnessDatagramNetwork::Socket::Socket(HarnessDatagramNetwork& net, std::string address, int priority)
    : net_(net), address_(std::move(address)), priority_(priority) {}

bool HarnessDatagramNetwork::Socket::send_to(const std::string& address, Lane lane, ByteView bytes) {
  net_.channel(address_, address).send(lane, bytes);
  return true;
}

bool HarnessDatagramNetwork::Socket::writable(const std::string& address) const {
  return net_.channel(address_, address).writable();
}

std::unique_ptr<HarnessDatagramNetwork::Socket> HarnessDatagramNetwork::open(std::string address, int priority) {
  auto sock = std::make_unique<Socket>(*this, address, priority);
  sockets_[address] = sock.get();
  return sock;
}

HarnessChannel& HarnessDatagramNetwork::channel(const std::string& from, const std::string& to) {
  auto key = std::make_pair(from, to);
  auto it = channels_.find(key);
  if (it == channels_.end()) {
    const std::uint64_t stream = 0x1000 + std::hash<std::string>{}(from + "->" + to) % 0xFFFFFF;
    auto ch = std::make_unique<HarnessChannel>(harness_, profile_, stream, [this, from, to](Lane lane, Bytes bytes) {
      auto sock = sockets_.find(to);
      if (sock != sockets_.end()) sock->second->inbox_.push(transport::Datagram{from, lane, std::move(bytes)});
    });
    ch->set_blocked(profile_.direct_path_blocked);
    it = channels_.emplace(key, std::move(ch)).first;
  }
  return *it->second;
}

ChannelStats HarnessDatagramNetwork::totals() const {
  ChannelStats t;
  for (auto& [_, ch] : channels_) {
    for (std::size_t i = 0; i < kLaneCount; ++i) {
      t.sent[i] += ch->stats().sent[i];
      t.delivered[i] += ch->stats().delivered[i];
      t.dropped[i] += ch->stats().dropped[i];
      t.duplicated[i] += ch->stats().duplicated[i];
    }
  }
  return t;
}

}  // namespace edgeplay::net
