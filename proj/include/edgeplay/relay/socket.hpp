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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/relay/relay.hpp"
#include "edgeplay/transport/framing.hpp"
#include "edgeplay/transport/link.hpp"

namespace edgeplay::relay {

/// "host:port" split. The host may be empty ("":7400 means any).
struct HostPort {
  std::string host;
  int port = 0;
};
Result<HostPort, std::string> parse_host_port(const std::string& text);

/// TCP front end for a Relay: one connection per member, relayed stream
/// framing on the wire, one poll thread for all connections. The health
/// endpoint answers GET /health with "ok" and the global counters.
class RelayServer {
 public:
  struct Options {
    std::string host = "0.0.0.0";
    int port = 7400;  // 0 picks a free port
    int health_port = 7401;  // 0 picks a free port, -1 disables
    /// A member whose unsent bytes exceed this is disconnected.
    std::size_t max_backlog = 32u << 20;
  };

  RelayServer(Relay& relay, const Clock& clock, Options opts);
  ~RelayServer();
  RelayServer(const RelayServer&) = delete;
  RelayServer& operator=(const RelayServer&) = delete;

  Result<void, std::string> start();
  void stop();

  int port() const { return port_; }
  int health_port() const { return health_port_; }
  std::size_t connections() const { return connections_.load(); }

  static std::string health_text(const GlobalStats& s);

 private:
  struct Conn;
  struct Health;
  void loop();
  void drop(Conn& c);

  Relay& relay_;
  const Clock& clock_;
  Options opts_;
  int listen_fd_ = -1;
  int wake_[2] = {-1, -1};
  int port_ = 0;
  int health_port_ = -1;
  std::atomic<bool> running_{false};
  std::atomic<std::size_t> connections_{0};
  std::thread thread_;
  std::unique_ptr<Health> health_;
};

/// Client side of the relayed stream over TCP. Non-blocking; every send()
/// and receive() pumps the socket. Reliable and ordered.
class TcpLink final : public transport::Link {
 public:
  static Result<std::unique_ptr<TcpLink>, std::string> connect(const std::string& host, int port,
                                                               int timeout_ms = 3000);
  ~TcpLink() override;

  bool send(Lane lane, ByteView bytes) override;
  std::optional<transport::Packet> receive() override;
  bool reliable() const override { return true; }
  bool is_open() const override;
  /// False while more than high_water bytes wait to be written.
  bool writable() const override;
  void close();

  static constexpr std::size_t kHighWater = 256u << 10;

 private:
  explicit TcpLink(int fd) : fd_(fd) {}
  void pump_locked();

  mutable std::mutex mu_;
  int fd_;
  bool open_ = true;
  Bytes out_;
  std::size_t out_pos_ = 0;
  transport::StreamDecoder decoder_;
  std::deque<transport::Packet> in_;
};

}  // namespace edgeplay::relay
