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

#include "edgeplay/transport/link.hpp"

namespace edgeplay::transport {

QueueLink::QueueLink(Out out, bool reliable, std::function<bool()> writable)
    : out_(std::move(out)), reliable_(reliable), writable_(std::move(writable)) {}

bool QueueLink::send(Lane lane, ByteView bytes) {
  {
    std::lock_guard lock(mu_);
    if (!open_) return false;
  }
  return out_(lane, bytes);
}

bool QueueLink::is_open() const {
  std::lock_guard lock(mu_);
  return open_;
}

void QueueLink::close() {
  std::lock_guard lock(mu_);
  open_ = false;
}

InProcessNetwork::Socket::Socket(InProcessNetwork& net, std::string address, int priority)
    : net_(net), address_(std::move(address)), priority_(priority) {}

InProcessNetwork::Socket::~Socket() {
  std::lock_guard lock(net_.mu_);
  net_.sockets_.erase(address_);
}

bool InProcessNetwork::Socket::send_to(const std::string& address, Lane lane, ByteView bytes) {
  if (!reachable_) return false;
  return net_.route(address_, address, lane, bytes);
}

std::unique_ptr<InProcessNetwork::Socket> InProcessNetwork::open(std::string address, int priority) {
  auto sock = std::make_unique<Socket>(*this, address, priority);
  std::lock_guard lock(mu_);
  sockets_[address] = sock.get();
  return sock;
}

bool InProcessNetwork::route(const std::string& from, const std::string& to, Lane lane, ByteView bytes) {
  std::lock_guard lock(mu_);
  auto it = sockets_.find(to);
  if (it == sockets_.end() || !it->second->reachable_) return false;
  it->second->inbox_.push(Datagram{from, lane, Bytes(bytes.begin(), bytes.end())});
  return true;
}

}  // namespace edgeplay::transport
