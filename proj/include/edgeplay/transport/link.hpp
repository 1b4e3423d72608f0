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

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/lane.hpp"
#include "edgeplay/transport/framing.hpp"

namespace edgeplay::transport {

/// Thread-safe FIFO of received packets.
template <class T>
class Inbox {
 public:
  void push(T item) {
    std::lock_guard lock(mu_);
    items_.push_back(std::move(item));
  }
  std::optional<T> pop() {
    std::lock_guard lock(mu_);
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    return item;
  }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

 private:
  mutable std::mutex mu_;
  std::deque<T> items_;
};

/// Point-to-point message path to the relay. send() may be called from any
/// thread; receive() only from the owning endpoint's tick.
class Link {
 public:
  virtual ~Link() = default;
  virtual bool send(Lane lane, ByteView bytes) = 0;
  virtual std::optional<Packet> receive() = 0;
  /// Reliable links deliver every message once and in order. Unreliable
  /// links get the transport's ack/resend layer on the reliable lanes.
  virtual bool reliable() const = 0;
  virtual bool is_open() const = 0;
  /// False while the path is congested; media sends are then held back.
  virtual bool writable() const { return true; }
};

/// Link backed by an inbox plus an outgoing function. Used by the in-process
/// backend and by the harness bindings.
class QueueLink final : public Link {
 public:
  using Out = std::function<bool(Lane, ByteView)>;

  QueueLink(Out out, bool reliable, std::function<bool()> writable = {});

  bool send(Lane lane, ByteView bytes) override;
  std::optional<Packet> receive() override { return inbox_.pop(); }
  bool reliable() const override { return reliable_; }
  bool is_open() const override;
  bool writable() const override { return writable_ ? writable_() : true; }

  /// Called by whatever sits on the far side.
  void deliver(Lane lane, Bytes bytes) { inbox_.push(Packet{lane, std::move(bytes)}); }
  void close();

 private:
  Out out_;
  bool reliable_;
  std::function<bool()> writable_;
  Inbox<Packet> inbox_;
  mutable std::mutex mu_;
  bool open_ = true;
};

/// A locally reachable transport address offered for direct connection.
struct Candidate {
  std::string address;
  /// Backend preference; higher is better.
  int priority = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Datagram {
  std::string from;
  Lane lane = Lane::Control;
  Bytes data;
};

/// Connectionless socket for the direct path, in the spirit of a hole-punched
/// UDP socket.
class DatagramSocket {
 public:
  virtual ~DatagramSocket() = default;
  virtual std::vector<Candidate> local_candidates() const = 0;
  virtual bool send_to(const std::string& address, Lane lane, ByteView bytes) = 0;
  virtual std::optional<Datagram> receive() = 0;
  virtual bool reliable() const = 0;
  virtual bool writable(const std::string& /*address*/) const { return true; }
};

/// Lossless in-memory network for tests and offline runs. Sockets must not
/// outlive the network.
class InProcessNetwork {
 public:
  class Socket final : public DatagramSocket {
   public:
    Socket(InProcessNetwork& net, std::string address, int priority);
    ~Socket() override;

    std::vector<Candidate> local_candidates() const override { return {{address_, priority_}}; }
    bool send_to(const std::string& address, Lane lane, ByteView bytes) override;
    std::optional<Datagram> receive() override { return inbox_.pop(); }
    bool reliable() const override { return true; }

    const std::string& address() const { return address_; }
    void set_reachable(bool reachable) { reachable_ = reachable; }

   private:
    friend class InProcessNetwork;
    InProcessNetwork& net_;
    std::string address_;
    int priority_;
    bool reachable_ = true;
    Inbox<Datagram> inbox_;
  };

  std::unique_ptr<Socket> open(std::string address, int priority = 100);

 private:
  friend class Socket;
  bool route(const std::string& from, const std::string& to, Lane lane, ByteView bytes);

  std::mutex mu_;
  std::map<std::string, Socket*> sockets_;
};

}  // namespace edgeplay::transport
