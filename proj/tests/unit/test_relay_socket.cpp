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

#include <doctest.h>

#include <chrono>
#include <random>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>

#include "edgeplay/protocol/taxonomy.hpp"
#include "edgeplay/relay/socket.hpp"
#include "edgeplay/transport/endpoint.hpp"

using namespace edgeplay;
using namespace edgeplay::relay;
using namespace std::chrono_literals;

namespace {

struct Server {
  Server() : server(relay, clock, {"127.0.0.1", 0, 0}) { REQUIRE(server.start()); }
  SteadyClock clock;
  Relay relay;
  RelayServer server;
};

std::unique_ptr<TcpLink> dial(const Server& s) {
  auto l = TcpLink::connect("127.0.0.1", s.server.port());
  REQUIRE(l);
  return std::move(*l);
}

// Waits up to 2 s for the next packet.
std::optional<transport::Packet> next(TcpLink& link) {
  for (int i = 0; i < 2000; ++i) {
    if (auto p = link.receive()) return p;
    std::this_thread::sleep_for(1ms);
  }
  return std::nullopt;
}

std::optional<protocol::Envelope> next_envelope(TcpLink& link) {
  auto p = next(link);
  if (!p || p->lane != Lane::Signaling) return std::nullopt;
  auto e = protocol::decode(std::string_view(reinterpret_cast<const char*>(p->data.data()), p->data.size()));
  if (!e) return std::nullopt;
  return *e;
}

void join(TcpLink& link, const std::string& session, const std::string& role) {
  protocol::IdGenerator ids{"t"};
  auto env = protocol::make_envelope(ids, std::string(protocol::types::kRelayJoin), {{"session", session}, {"role", role}});
  REQUIRE(link.send(Lane::Signaling, to_bytes(*protocol::encode(env))));
}

}  // namespace

TEST_CASE("host:port parsing") {
  CHECK(parse_host_port("relay.example:7400")->host == "relay.example");
  CHECK(parse_host_port("relay.example:7400")->port == 7400);
  CHECK(parse_host_port(":0")->host.empty());
  CHECK_FALSE(parse_host_port("relay"));
  CHECK_FALSE(parse_host_port("relay:70000"));
  CHECK_FALSE(parse_host_port("relay:7a"));
}

TEST_CASE("bytes cross the socket relay verbatim and in order") {
  Server s;
  auto a = dial(s), b = dial(s);
  join(*a, "s1", "initiator");
  CHECK(next_envelope(*a)->type == "relay.joined");
  join(*b, "s1", "responder");
  CHECK(next_envelope(*b)->type == "relay.joined");
  CHECK(next_envelope(*a)->type == "relay.peer_joined");

  std::mt19937 rng(3);
  std::vector<transport::Packet> sent;
  for (int i = 0; i < 300; ++i) {
    transport::Packet p;
    p.lane = static_cast<Lane>(rng() % 2);
    p.data.resize(1 + rng() % 5000);
    for (auto& x : p.data) x = static_cast<std::uint8_t>(rng());
    REQUIRE(a->send(p.lane, p.data));
    sent.push_back(std::move(p));
  }
  std::vector<transport::Packet> got;
  while (got.size() < sent.size()) {
    auto p = next(*b);
    REQUIRE(p);
    got.push_back(std::move(*p));
  }
  CHECK(got == sent);

  const auto st = s.relay.room_stats("s1");
  REQUIRE(st);
  std::uint64_t bytes = 0;
  for (auto& p : sent) bytes += p.data.size();
  CHECK(st->relayed.fallback_bytes() == bytes);
}

TEST_CASE("rooms are isolated and a third member is refused") {
  Server s;
  auto a1 = dial(s), b1 = dial(s), a2 = dial(s), b2 = dial(s), extra = dial(s);
  join(*a1, "one", "initiator");
  join(*b1, "one", "responder");
  join(*a2, "two", "initiator");
  join(*b2, "two", "responder");
  for (auto* l : {a1.get(), b1.get(), a2.get(), b2.get()}) CHECK(next_envelope(*l)->type == "relay.joined");
  CHECK(next_envelope(*a1)->type == "relay.peer_joined");
  CHECK(next_envelope(*a2)->type == "relay.peer_joined");
  join(*extra, "one", "responder");
  auto refused = next_envelope(*extra);
  REQUIRE(refused);
  CHECK(refused->type == "relay.error");

  const Bytes msg{1, 2, 3};
  REQUIRE(a1->send(Lane::Media, msg));
  auto p = next(*b1);
  REQUIRE(p);
  CHECK(p->data == msg);
  std::this_thread::sleep_for(50ms);
  CHECK_FALSE(b2->receive());
  CHECK_FALSE(a2->receive());
}

TEST_CASE("a malformed stream closes only that connection") {
  Server s;
  auto good = dial(s);
  join(*good, "s", "initiator");
  CHECK(next_envelope(*good)->type == "relay.joined");

  int sock = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(s.server.port()));
  ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::connect(sock, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  const Bytes junk{0, 0, 0, 2, 9, 0};  // lane tag 9
  REQUIRE(::send(sock, junk.data(), junk.size(), 0) == static_cast<ssize_t>(junk.size()));
  timeval tv{2, 0};
  ::setsockopt(sock, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  char c;
  CHECK(::recv(sock, &c, 1, 0) == 0);
  ::close(sock);

  CHECK(good->is_open());
  CHECK(good->send(Lane::Signaling, Bytes{'x'}));
}

TEST_CASE("health endpoint reports ok and counters") {
  Server s;
  httplib::Client cli("127.0.0.1", s.server.health_port());
  auto res = cli.Get("/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body.rfind("ok\n", 0) == 0);
  CHECK(res->body.find("rooms_open 0") != std::string::npos);
  auto a = dial(s);
  join(*a, "h", "initiator");
  CHECK(next_envelope(*a)->type == "relay.joined");
  res = cli.Get("/health");
  REQUIRE(res);
  CHECK(res->body.find("rooms_open 1") != std::string::npos);
  CHECK(res->body.find("joins 1") != std::string::npos);
}

TEST_CASE("two endpoints establish over the socket relay and talk") {
  Server s;
  auto edge_link = dial(s), web_link = dial(s);
  transport::EndpointOptions eo;
  eo.session_id = "live";
  eo.deadline_ms = 50;
  auto edge_opts = eo, web_opts = eo;
  edge_opts.role = transport::Role::Responder;
  edge_opts.source = "edge";
  edge_opts.establish_timeout_ms = 0;
  web_opts.role = transport::Role::Initiator;
  web_opts.source = "web";
  SteadyClock clock;
  transport::Endpoint edge(edge_opts, clock, *edge_link), web(web_opts, clock, *web_link);
  edge.start();
  web.start();
  for (int i = 0; i < 5000 && !(edge.connected() && web.connected()); ++i) {
    edge.tick();
    web.tick();
    std::this_thread::sleep_for(1ms);
  }
  REQUIRE(edge.connected());
  REQUIRE(web.connected());
  CHECK(edge.phase() == transport::Phase::ConnectedRelayed);

  REQUIRE(web.send(web.make("scene.load", {{"scene", "TinkerCoin"}})));
  REQUIRE(edge.send_media(Bytes(3000, 7)));
  std::vector<protocol::Envelope> got;
  std::vector<Bytes> media;
  for (int i = 0; i < 2000 && (got.empty() || media.empty()); ++i) {
    edge.tick();
    web.tick();
    for (auto& e : edge.poll_inbound(16).envelopes) got.push_back(e);
    for (auto& m : web.poll_media()) media.push_back(m);
    std::this_thread::sleep_for(1ms);
  }
  REQUIRE(got.size() == 1);
  CHECK(got[0].type == "scene.load");
  REQUIRE(media.size() == 1);
  CHECK(media[0] == Bytes(3000, 7));
}
