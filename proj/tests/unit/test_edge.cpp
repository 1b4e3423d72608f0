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

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "edgeplay/edge/client.hpp"
#include "edgeplay/edge/edge_node.hpp"
#include "edgeplay/edge/script.hpp"
#include "edgeplay/net/bindings.hpp"

using namespace edgeplay;
using namespace edgeplay::edge;

namespace {

namespace fs = std::filesystem;

std::shared_ptr<scenes::SceneSettings> fast_settings(const fs::path& dir) {
  auto s = std::make_shared<scenes::SceneSettings>();
  s->train_steps_per_tick = 16;
  s->task.schedule.compress = 50;
  s->checkpoint_path = (dir / "ckpt.gwpl").string();
  return s;
}

struct TempDir {
  TempDir() : path(fs::temp_directory_path() / ("edgeplay-edge-" + std::to_string(::getpid()) + "-" + std::to_string(n++))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
  static inline int n = 0;
};

/// Edge and headless client on one virtual clock through a relay reached
/// either in-process or through harness channels.
struct Session {
  explicit Session(const fs::path& dir, std::optional<net::NetProfile> profile = std::nullopt)
      : harness(0),
        edge_port(profile ? net::connect_via_harness(relay, harness, *profile, 1)
                          : net::connect_in_process(relay, harness.clock())),
        web_port(profile ? net::connect_via_harness(relay, harness, *profile, 2)
                         : net::connect_in_process(relay, harness.clock())),
        edge_ep(edge_options(), harness.clock(), edge_port->link()),
        node(harness.clock(), fast_settings(dir), {}, EdgeOptions{}),
        client(harness.clock(), web_port->link(), ClientOptions{"s1", 200, 20000, 7}) {
    REQUIRE(node.boot());
    node.attach(&edge_ep);
    edge_ep.start();
    client.start();
  }

  static transport::EndpointOptions edge_options() {
    transport::EndpointOptions eo;
    eo.role = transport::Role::Responder;
    eo.session_id = "s1";
    eo.establish_timeout_ms = 0;
    eo.deadline_ms = 200;
    return eo;
  }

  // 1 ms harness steps; the edge and client loops run every 16 ms.
  void run(Millis ms) {
    const Millis until = harness.now() + ms;
    while (harness.now() < until) {
      harness.run(harness.now() + 1, 1);
      if (harness.now() % 16 == 0) {
        node.tick();
        client.tick();
      }
    }
  }

  void play(const std::vector<ScriptStep>& steps) {
    for (auto& s : steps) {
      if (s.kind == ScriptStep::Kind::Wait) {
        run(s.wait_ms);
      } else {
        REQUIRE(client.send(s));
      }
    }
  }

  net::Harness harness;
  relay::Relay relay;
  std::unique_ptr<net::RelayPort> edge_port, web_port;
  transport::Endpoint edge_ep;
  EdgeNode node;
  HeadlessClient client;
};

}  // namespace

TEST_CASE("script commands") {
  auto s = parse_script(R"(# demo
load TinkerCoin
train on   # start
wait 30s
wait 250ms
wait 2
move 1 0 0.8 run
policy walker-v1
send control.move {"dir": [0, 1], "speed": 0.5}
send scene.status
train off
)");
  REQUIRE(s);
  REQUIRE(s->size() == 10);
  CHECK((*s)[0].type == "scene.load");
  CHECK((*s)[0].payload == nlohmann::json{{"scene", "TinkerCoin"}});
  CHECK((*s)[0].line == 2);
  CHECK((*s)[1].payload == nlohmann::json{{"training", true}});
  CHECK((*s)[2].wait_ms == 30000);
  CHECK((*s)[3].wait_ms == 250);
  CHECK((*s)[4].wait_ms == 2000);
  CHECK((*s)[5].payload == nlohmann::json{{"dir", {1.0, 0.0}}, {"speed", 0.8}, {"mode", "run"}});
  CHECK((*s)[6].payload == nlohmann::json{{"name", "walker-v1"}});
  CHECK((*s)[7].payload["speed"] == 0.5);
  CHECK((*s)[8].type == "scene.status");
  CHECK(script_duration(*s) == 32250);
}

TEST_CASE("script errors name the line") {
  auto bad = [](const char* text) { return parse_script(text).error(); };
  CHECK(bad("load A\nfly away").line == 2);
  CHECK(bad("wait soon").reason.find("number") != std::string::npos);
  CHECK(bad("wait -1s").line == 1);
  CHECK(bad("train maybe").line == 1);
  CHECK(bad("move 1 0").line == 1);
  CHECK(bad("send x.y {broken").reason == "bad JSON payload");
  CHECK(load_script("/nonexistent/script.txt").error().reason.find("cannot open") == 0);
}

TEST_CASE("edge boots with no active scene unless a default is given") {
  TempDir dir;
  VirtualClock clock;
  EdgeNode bare(clock, fast_settings(dir.path), {}, EdgeOptions{});
  REQUIRE(bare.boot());
  clock.set(1000);
  bare.tick();
  CHECK_FALSE(bare.director().active());
  CHECK(bare.director().scenes().size() == 3);

  // Same flags twice reach the same bootstrap state.
  for (int run = 0; run < 2; ++run) {
    VirtualClock c;
    EdgeOptions o;
    o.default_scene = "play";
    EdgeNode node(c, fast_settings(dir.path), {}, o);
    REQUIRE(node.boot());
    for (Millis t = 16; t <= 400; t += 16) {
      c.set(t);
      node.tick();
    }
    CHECK(node.director().active() == std::optional<std::string>("Playground"));
  }
  EdgeOptions wrong;
  wrong.default_scene = "Atlantis";
  EdgeNode node(clock, fast_settings(dir.path), {}, wrong);
  CHECK_FALSE(node.boot());
}

TEST_CASE("offline edge writes a JSONL log") {
  TempDir dir;
  const auto path = (dir.path / "edge.jsonl").string();
  {
    auto log = JsonlLog::open(path);
    REQUIRE(log);
    VirtualClock clock;
    EdgeNode node(clock, fast_settings(dir.path), {}, EdgeOptions{}, *log);
    REQUIRE(node.boot());
    node.inject("scene.load", {{"scene", "coin"}});
    node.inject("training.set_flag", {{"training", true}});
    for (Millis t = 16; t <= 5000; t += 16) {
      clock.set(t);
      node.tick();
    }
  }
  std::ifstream in(path);
  std::set<std::string> types;
  int lines = 0;
  for (std::string line; std::getline(in, line); ++lines) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    REQUIRE_FALSE(j.is_discarded());
    REQUIRE(j.is_object());
    if (j.contains("envelope")) types.insert(j["envelope"]["type"].get<std::string>());
  }
  CHECK(lines > 10);
  CHECK(types.count("telemetry.reward"));
  CHECK(types.count("telemetry.episode"));
  CHECK(types.count("telemetry.curriculum"));
}

TEST_CASE("headless client: TinkerCoin training over 30 s of virtual time") {
  TempDir dir;
  Session s(dir.path);
  auto script = parse_script("load TinkerCoin\ntrain on\nwait 30s\n");
  REQUIRE(s.client.connected() == false);
  s.run(2000);
  REQUIRE(s.client.connected());
  s.play(*script);

  const auto seen = s.client.types_seen();
  CHECK(seen.count("telemetry.reward"));
  CHECK(seen.count("telemetry.episode"));
  CHECK(seen.count("telemetry.curriculum"));
  CHECK(seen.count("scene.status"));

  const auto& seqs = s.client.frame_seqs();
  REQUIRE(seqs.size() > 100);
  CHECK(std::adjacent_find(seqs.begin(), seqs.end(), std::greater_equal<>()) == seqs.end());
  CHECK(s.client.frame_errors() == 0);
  // At most 30 frames in any second of the 30 s (the pacer's cap).
  CHECK(seqs.size() <= 32 * 30);
}

TEST_CASE("headless client: unknown scene is answered with protocol.error") {
  TempDir dir;
  Session s(dir.path);
  s.run(2000);
  REQUIRE(s.client.connected());
  s.play(*parse_script("load Atlantis\nwait 1s\n"));
  auto errs = std::count_if(s.client.received().begin(), s.client.received().end(), [](auto& e) {
    return e.type == "protocol.error" && e.payload.value("code", "") == "UnknownScene";
  });
  CHECK(errs == 1);
}

TEST_CASE("displayed frame seqs stay increasing on a lossy path") {
  TempDir dir;
  auto profile = *net::NetProfile::preset("lossy-wifi");
  profile.seed = 11;
  Session s(dir.path, profile);
  s.run(5000);
  REQUIRE(s.client.connected());
  s.play(*parse_script("load RoboHeTu\nmove 1 0 0.8\nwait 10s\n"));
  const auto& seqs = s.client.frame_seqs();
  REQUIRE(seqs.size() > 50);
  CHECK(std::adjacent_find(seqs.begin(), seqs.end(), std::greater_equal<>()) == seqs.end());
  CHECK(*std::max_element(seqs.begin(), seqs.end()) <= *s.node.last_sent_seq());
}
