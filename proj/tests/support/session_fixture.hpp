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

#include <memory>
#include <optional>
#include <string>

#include "edgeplay/net/bindings.hpp"
#include "edgeplay/net/harness.hpp"
#include "edgeplay/relay/relay.hpp"
#include "edgeplay/transport/endpoint.hpp"

namespace edgeplay::testing {

/// Two endpoints (edge responder, web initiator) joined through a relay.
/// Backend InProcess: lossless queues and an in-process direct path.
/// Backend Harness: every hop and the direct path shaped by one profile.
struct SessionFixture {
  enum class Backend { InProcess, Harness };

  struct Options {
    Backend backend = Backend::InProcess;
    net::NetProfile profile{};
    bool direct_reachable = true;
    Millis deadline_ms = 1000;
    std::uint64_t seed = 1;
    bool coalesce = true;
  };

  explicit SessionFixture(Options o) : opts(o), harness(0) {
    transport::EndpointOptions eo;
    eo.session_id = "s1";
    eo.deadline_ms = o.deadline_ms;
    eo.coalesce_snapshots = o.coalesce;
    eo.establish_timeout_ms = 60000;
    eo.join_timeout_ms = 20000;

    if (o.backend == Backend::InProcess) {
      edge_port = net::connect_in_process(relay, harness.clock());
      web_port = net::connect_in_process(relay, harness.clock());
      edge_sock = inproc.open("inproc:edge");
      web_sock = inproc.open("inproc:web");
      if (!o.direct_reachable) edge_sock->set_reachable(false);
      edge_direct = edge_sock.get();
      web_direct = web_sock.get();
    } else {
      edge_port = net::connect_via_harness(relay, harness, o.profile, 1);
      web_port = net::connect_via_harness(relay, harness, o.profile, 2);
      auto p = o.profile;
      if (!o.direct_reachable) p.direct_path_blocked = true;
      dgram = std::make_unique<net::HarnessDatagramNetwork>(harness, p);
      hedge_sock = dgram->open("10.0.0.2:7000");
      hweb_sock = dgram->open("192.168.1.5:51000");
      edge_direct = hedge_sock.get();
      web_direct = hweb_sock.get();
    }

    auto edge_opts = eo;
    edge_opts.role = transport::Role::Responder;
    edge_opts.source = "edge";
    edge_opts.seed = o.seed * 2;
    auto web_opts = eo;
    web_opts.role = transport::Role::Initiator;
    web_opts.source = "web";
    web_opts.seed = o.seed * 2 + 1;
    edge = std::make_unique<transport::Endpoint>(edge_opts, harness.clock(), edge_port->link(), edge_direct);
    web = std::make_unique<transport::Endpoint>(web_opts, harness.clock(), web_port->link(), web_direct);
  }

  /// Advances virtual time by ms in 1 ms steps, ticking both endpoints.
  void run(Millis ms) {
    harness.run(harness.now() + ms, 1, [this] {
      edge->tick();
      web->tick();
    });
  }

  /// Starts both sides and runs until both are connected or limit passes.
  bool connect(Millis limit_ms = 30000) {
    edge->start();
    web->start();
    const Millis until = harness.now() + limit_ms;
    while (harness.now() < until) {
      run(1);
      if (edge->connected() && web->connected()) return true;
      if (edge->terminal() || web->terminal()) return false;
    }
    return false;
  }

  Options opts;
  net::Harness harness;
  relay::Relay relay;
  transport::InProcessNetwork inproc;
  std::unique_ptr<net::RelayPort> edge_port, web_port;
  std::unique_ptr<transport::InProcessNetwork::Socket> edge_sock, web_sock;
  std::unique_ptr<net::HarnessDatagramNetwork> dgram;
  std::unique_ptr<net::HarnessDatagramNetwork::Socket> hedge_sock, hweb_sock;
  transport::DatagramSocket* edge_direct = nullptr;
  transport::DatagramSocket* web_direct = nullptr;
  std::unique_ptr<transport::Endpoint> edge, web;
};

}  // namespace edgeplay::testing
