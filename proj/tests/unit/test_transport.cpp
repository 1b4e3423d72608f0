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

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "edgeplay/transport/arq.hpp"
#include "edgeplay/transport/buffers.hpp"
#include "edgeplay/transport/endpoint.hpp"
#include "edgeplay/transport/framing.hpp"
#include "support/session_fixture.hpp"

using namespace edgeplay;
using namespace edgeplay::transport;
using edgeplay::testing::SessionFixture;
using protocol::CommandClass;
using protocol::Envelope;

namespace {

Envelope env_of(std::string type, std::string id, nlohmann::json payload = nlohmann::json::object()) {
  Envelope e;
  e.id = std::move(id);
  e.type = std::move(type);
  e.source = "web";
  e.ts = 1;
  e.payload = std::move(payload);
  return e;
}

std::vector<std::string> ids_of(const std::vector<Envelope>& envs) {
  std::vector<std::string> out;
  for (auto& e : envs) out.push_back(e.id);
  return out;
}

std::vector<Envelope> drain(Endpoint& ep) { return ep.poll_inbound(1u << 20).envelopes; }

}  // namespace

TEST_CASE("stream frame layout is length, lane, payload") {
  auto f = encode_stream_frame(Lane::Media, to_bytes("abc"));
  CHECK(f == Bytes{0, 0, 0, 4, 1, 'a', 'b', 'c'});
  auto empty = encode_stream_frame(Lane::Signaling, {});
  CHECK(empty == Bytes{0, 0, 0, 1, 2});
}

TEST_CASE("stream decoder reassembles frames split at arbitrary points") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    std::vector<Packet> sent;
    Bytes wire;
    const int n = std::uniform_int_distribution<int>(1, 20)(rng);
    for (int i = 0; i < n; ++i) {
      Packet p;
      p.lane = static_cast<Lane>(std::uniform_int_distribution<int>(0, 2)(rng));
      p.data.resize(std::uniform_int_distribution<std::size_t>(0, 300)(rng));
      for (auto& b : p.data) b = static_cast<std::uint8_t>(rng());
      append_stream_frame(wire, p.lane, p.data);
      sent.push_back(std::move(p));
    }
    StreamDecoder dec;
    std::vector<Packet> got;
    std::size_t pos = 0;
    while (pos < wire.size()) {
      auto len = std::min(wire.size() - pos, std::uniform_int_distribution<std::size_t>(1, 64)(rng));
      auto r = dec.feed(ByteView(wire.data() + pos, len));
      REQUIRE(r);
      for (auto& p : *r) got.push_back(std::move(p));
      pos += len;
    }
    CHECK(got == sent);
    CHECK(dec.buffered() == 0);
  }
}

TEST_CASE("stream decoder rejects bad frames") {
  StreamDecoder a;
  CHECK(a.feed(Bytes{0, 0, 0, 0}).error().code == FramingErrc::ZeroLength);
  CHECK(a.failed());
  StreamDecoder b;
  CHECK(b.feed(Bytes{0, 0, 0, 1, 3}).error().code == FramingErrc::BadLane);
  StreamDecoder c(100);
  CHECK(c.feed(Bytes{0, 0, 1, 0}).error().code == FramingErrc::Oversize);
}

TEST_CASE("reliable lane delivers exactly once and in order over a hostile path") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 50; ++round) {
    ReliableLane tx, rx;
    std::multimap<Millis, Bytes> to_rx, to_tx;
    std::vector<int> delivered;
    const int n = 200;
    Millis now = 0;
    std::uniform_real_distribution<double> u(0, 1);
    auto lossy_send = [&](std::multimap<Millis, Bytes>& q, Bytes frame) {
      if (u(rng) < 0.3) return;
      q.emplace(now + std::uniform_int_distribution<int>(1, 80)(rng), frame);
      if (u(rng) < 0.05) q.emplace(now + std::uniform_int_distribution<int>(1, 80)(rng), frame);
    };
    for (int i = 0; i < n; ++i) {
      Bytes payload;
      put_u32_be(payload, static_cast<std::uint32_t>(i));
      lossy_send(to_rx, tx.wrap(payload, now));
    }
    for (now = 0; now < 60000 && (tx.unacked() > 0 || !to_rx.empty()); ++now) {
      for (auto& f : tx.due(now)) lossy_send(to_rx, f);
      while (!to_rx.empty() && to_rx.begin()->first <= now) {
        auto frame = to_rx.begin()->second;
        to_rx.erase(to_rx.begin());
        auto in = rx.on_frame(frame);
        if (in.ack) lossy_send(to_tx, *in.ack);
        for (auto& p : in.delivered) delivered.push_back(static_cast<int>(get_u32_be(p.data())));
      }
      while (!to_tx.empty() && to_tx.begin()->first <= now) {
        (void)tx.on_frame(to_tx.begin()->second);
        to_tx.erase(to_tx.begin());
      }
    }
    REQUIRE(delivered.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(delivered[static_cast<std::size_t>(i)] == i);
    CHECK(tx.unacked() == 0);
  }
}

TEST_CASE("fast retransmit resends a gap after three later acks, without backoff") {
  ReliableLane tx, rx;
  std::vector<Bytes> frames;
  for (int i = 0; i < 5; ++i) frames.push_back(tx.wrap(Bytes{static_cast<std::uint8_t>(i)}, 0));
  // The first frame is lost; the next three arrive and are acked.
  std::vector<Bytes> acks;
  for (int i : {1, 2, 3}) acks.push_back(*rx.on_frame(frames[static_cast<std::size_t>(i)]).ack);
  for (std::size_t i = 0; i < 2; ++i) (void)tx.on_frame(acks[i]);
  CHECK(tx.due(10).empty());
  (void)tx.on_frame(acks[2]);
  auto resent = tx.due(10);
  REQUIRE(resent.size() == 1);
  CHECK(resent[0] == frames[0]);
  CHECK(tx.fast_retransmissions() == 1);
  // Acks for frames sent before the resend do not trigger it again.
  (void)tx.on_frame(*rx.on_frame(frames[4]).ack);
  CHECK(tx.due(11).empty());
  // The regular timer still runs from the resend, unbacked-off.
  CHECK(tx.due(209).empty());
  CHECK(tx.due(210).size() == 1);
  auto in = rx.on_frame(frames[0]);
  CHECK(in.delivered.size() == 5);
}

TEST_CASE("outbound buffer keeps only the newest snapshot per type") {
  OutboundBuffer buf;
  for (int i = 0; i < 5; ++i) buf.push(env_of("control.move", "m" + std::to_string(i)), CommandClass::Snapshot);
  auto all = buf.take_all();
  REQUIRE(all.size() == 1);
  CHECK(all[0].id == "m4");
  CHECK(buf.empty());
}

TEST_CASE("outbound buffer matches a reference model over random push sequences") {
  // Reference: a plain list rebuilt from the stated rules.
  std::mt19937_64 rng(8);
  const char* types[] = {"scene.load", "training.set_flag", "control.move", "camera.pan"};
  const CommandClass classes[] = {CommandClass::StateIntent, CommandClass::StateIntent, CommandClass::Snapshot,
                                  CommandClass::Snapshot};
  for (int round = 0; round < 300; ++round) {
    const std::size_t cap = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    OutboundBuffer buf(cap);
    std::vector<std::pair<std::string, int>> model;  // (id, type index)
    const int steps = std::uniform_int_distribution<int>(1, 30)(rng);
    for (int s = 0; s < steps; ++s) {
      int t = std::uniform_int_distribution<int>(0, 3)(rng);
      std::string id = "e" + std::to_string(s);
      auto got = buf.push(env_of(types[t], id), classes[t]);

      BufferPush expect = BufferPush::Appended;
      bool snapshot = classes[t] == CommandClass::Snapshot;
      auto same = std::find_if(model.begin(), model.end(), [&](auto& m) { return snapshot && m.second == t; });
      if (same != model.end()) {
        model.erase(same);
        model.emplace_back(id, t);
        expect = BufferPush::Superseded;
      } else if (model.size() >= cap) {
        auto victim = std::find_if(model.begin(), model.end(),
                                   [&](auto& m) { return classes[m.second] == CommandClass::Snapshot; });
        if (snapshot || victim == model.end()) {
          expect = BufferPush::Overflow;
        } else {
          model.erase(victim);
          model.emplace_back(id, t);
        }
      } else {
        model.emplace_back(id, t);
      }
      CHECK(got == expect);
      REQUIRE(buf.size() == model.size());
      for (std::size_t i = 0; i < model.size(); ++i) CHECK(buf.entries()[i].first.id == model[i].first);
      CHECK(buf.size() <= cap);
    }
  }
}

TEST_CASE("inbound queue coalesces snapshots and keeps FIFO order") {
  InboundQueue q;
  q.push(env_of("scene.load", "A"));
  q.push(env_of("control.move", "B"));
  q.push(env_of("control.move", "C"));
  auto r = q.poll(10);
  CHECK(ids_of(r.envelopes) == std::vector<std::string>{"A", "C"});
  CHECK(r.coalesced == 1);
  CHECK(q.poll(10).envelopes.empty());

  InboundQueue plain(false);
  for (int i = 0; i < 10; ++i) plain.push(env_of("scene.load", "s" + std::to_string(i)));
  auto first = plain.poll(4);
  CHECK(ids_of(first.envelopes) == std::vector<std::string>{"s0", "s1", "s2", "s3"});
  CHECK(plain.size() == 6);

  InboundQueue mixed;
  mixed.push(env_of("control.move", "m1"));
  mixed.push(env_of("scene.load", "L"));
  mixed.push(env_of("control.move", "m2"));
  mixed.push(env_of("never.seen", "U1"));
  mixed.push(env_of("never.seen", "U2"));
  auto m = mixed.poll(10);
  CHECK(ids_of(m.envelopes) == std::vector<std::string>{"L", "m2", "U1", "U2"});
}

TEST_CASE("phase transitions form a DAG that never skips descriptor exchange") {
  const Phase all[] = {Phase::Idle, Phase::Joining, Phase::ExchangingDescriptors, Phase::GatheringCandidates,
                       Phase::Connecting, Phase::ConnectedDirect, Phase::ConnectedRelayed, Phase::Failed,
                       Phase::Closed};
  // Depth-first search for cycles.
  std::function<bool(Phase, std::set<Phase>&)> cyclic = [&](Phase p, std::set<Phase>& stack) {
    if (stack.count(p)) return true;
    stack.insert(p);
    for (Phase q : all) {
      if (legal_transition(p, q) && cyclic(q, stack)) return true;
    }
    stack.erase(p);
    return false;
  };
  std::set<Phase> stack;
  CHECK_FALSE(cyclic(Phase::Idle, stack));
  for (Phase p : {Phase::Idle, Phase::Joining}) {
    CHECK_FALSE(legal_transition(p, Phase::GatheringCandidates));
    CHECK_FALSE(legal_transition(p, Phase::Connecting));
    CHECK_FALSE(legal_transition(p, Phase::ConnectedDirect));
    CHECK_FALSE(legal_transition(p, Phase::ConnectedRelayed));
  }
}

TEST_CASE("in-process peers connect directly and walk every phase") {
  SessionFixture f({});
  std::vector<Phase> seen;
  f.web->set_phase_observer([&](const PhaseEvent& ev) { seen.push_back(ev.phase); });
  REQUIRE(f.connect(1000));
  CHECK(f.web->phase() == Phase::ConnectedDirect);
  CHECK(f.edge->phase() == Phase::ConnectedDirect);
  CHECK(seen == std::vector<Phase>{Phase::Joining, Phase::ExchangingDescriptors, Phase::GatheringCandidates,
                                   Phase::Connecting, Phase::ConnectedDirect});
  auto events = f.edge->events();
  for (std::size_t i = 1; i < events.size(); ++i) CHECK(legal_transition(events[i - 1].phase, events[i].phase));
  auto st = f.web->state();
  CHECK(st.session_id == "s1");
  CHECK(st.candidates_remote.size() == 1);
  CHECK(f.web->direct_peer() == std::optional<std::string>("inproc:edge"));
}

TEST_CASE("establish helper returns the connected phase") {
  SessionFixture f({});
  f.edge->start();
  auto r = establish(*f.web, f.harness.clock(), 1000, [&] {
    (void)f.harness.advance(f.harness.now() + 1);
    f.edge->tick();
  });
  REQUIRE(r);
  CHECK(*r == Phase::ConnectedDirect);
}

TEST_CASE("blocked direct path falls back to the relay after the deadline") {
  SessionFixture::Options o;
  o.direct_reachable = false;
  o.deadline_ms = 400;
  SessionFixture f(o);
  REQUIRE(f.connect(5000));
  CHECK(f.web->phase() == Phase::ConnectedRelayed);
  CHECK(f.edge->phase() == Phase::ConnectedRelayed);
  auto events = f.web->events();
  CHECK(events.back().at >= 400);
  CHECK(f.web->stats().checks_sent > 0);
}

TEST_CASE("unreachable relay fails with SignalingUnreachable") {
  net::Harness h;
  QueueLink dead([](Lane, ByteView) { return false; }, true);
  dead.close();
  EndpointOptions o;
  o.session_id = "s";
  Endpoint ep(o, h.clock(), dead);
  auto r = establish(ep, h.clock(), 5000, [&] { (void)h.advance(h.now() + 1); });
  REQUIRE_FALSE(r);
  CHECK(r.error().code == TransportErrc::SignalingUnreachable);
  CHECK(ep.phase() == Phase::Failed);

  // A link that is open but never answers.
  QueueLink silent([](Lane, ByteView) { return true; }, true);
  o.join_timeout_ms = 500;
  Endpoint ep2(o, h.clock(), silent);
  auto r2 = establish(ep2, h.clock(), 5000, [&] { (void)h.advance(h.now() + 1); });
  REQUIRE_FALSE(r2);
  CHECK(r2.error().code == TransportErrc::SignalingUnreachable);
}

TEST_CASE("pre-open sends are buffered and flushed in order") {
  SessionFixture f({});
  for (auto id : {"a", "b", "c"}) CHECK(*f.web->send(env_of("scene.load", id)) == SendStatus::Buffered);
  REQUIRE(f.connect());
  CHECK(*f.web->send(env_of("scene.load", "d")) == SendStatus::Accepted);
  f.run(5);
  CHECK(ids_of(drain(*f.edge)) == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(f.web->stats().flushed == 3);
}

TEST_CASE("only the newest buffered snapshot survives the flush") {
  SessionFixture::Options o;
  o.coalesce = false;
  SessionFixture f(o);
  for (int i = 0; i < 5; ++i) (void)f.web->send(env_of("control.move", "m" + std::to_string(i)));
  REQUIRE(f.connect());
  f.run(5);
  CHECK(ids_of(drain(*f.edge)) == std::vector<std::string>{"m4"});
}

TEST_CASE("send after close reports SessionClosed") {
  SessionFixture f({});
  REQUIRE(f.connect());
  f.web->close();
  auto r = f.web->send(env_of("scene.load", "x"));
  REQUIRE_FALSE(r);
  CHECK(r.error().code == TransportErrc::SessionClosed);
  CHECK(f.web->send_media(Bytes{1}).error().code == TransportErrc::SessionClosed);
  f.run(5);
  CHECK(f.edge->phase() == Phase::Closed);
}

TEST_CASE("media on the in-process backend arrives exactly once; empty frames are rejected") {
  SessionFixture f({});
  CHECK(f.web->send_media(Bytes{1}).error().code == TransportErrc::NotConnected);
  REQUIRE(f.connect());
  CHECK(f.edge->send_media({}).error().code == TransportErrc::InvalidFrame);
  REQUIRE(f.edge->send_media(Bytes{9, 8, 7}));
  f.run(3);
  auto got = f.web->poll_media();
  REQUIRE(got.size() == 1);
  CHECK(got[0] == Bytes{9, 8, 7});
}

TEST_CASE("invalid envelopes are refused at send") {
  SessionFixture f({});
  auto bad = env_of("NotAType", "x");
  CHECK(f.web->send(bad).error().code == TransportErrc::InvalidEnvelope);
}

TEST_CASE("hostile profile: relayed session, ordered control, monotone media") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SessionFixture::Options o;
    o.backend = SessionFixture::Backend::Harness;
    o.profile = *net::NetProfile::preset("hostile");
    o.profile.seed = seed;
    o.coalesce = false;
    o.seed = seed;
    SessionFixture f(o);
    REQUIRE(f.connect(60000));
    CHECK(f.web->phase() == Phase::ConnectedRelayed);

    std::vector<std::string> sent;
    for (int i = 0; i < 100; ++i) {
      sent.push_back("k" + std::to_string(i));
      REQUIRE(f.web->send(env_of("scene.load", sent.back())));
      Bytes frame;
      put_u32_be(frame, static_cast<std::uint32_t>(i));
      REQUIRE(f.edge->send_media(frame));
      f.run(5);
    }
    f.run(20000);
    CHECK(ids_of(drain(*f.edge)) == sent);
    std::vector<std::uint32_t> seqs;
    for (auto& m : f.web->poll_media()) seqs.push_back(get_u32_be(m.data()));
    CHECK(seqs.size() < 100);
    CHECK(seqs.size() > 10);
  }
}

TEST_CASE("lossy-wifi profile connects directly") {
  SessionFixture::Options o;
  o.backend = SessionFixture::Backend::Harness;
  o.profile = *net::NetProfile::preset("lossy-wifi");
  o.profile.seed = 4;
  SessionFixture f(o);
  REQUIRE(f.connect(60000));
  CHECK(f.web->phase() == Phase::ConnectedDirect);
  CHECK(f.edge->phase() == Phase::ConnectedDirect);
}
