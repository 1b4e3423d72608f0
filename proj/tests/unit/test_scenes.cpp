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
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>

#include <unistd.h>

#include "edgeplay/scenes/scenes.hpp"

using namespace edgeplay;
using namespace edgeplay::scenes;
using protocol::Envelope;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  TempDir() {
    path = fs::temp_directory_path() / ("edgeplay-scenes-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
  static inline int counter = 0;
};

PolicyLibrary two_policies(const fs::path& dir) {
  for (auto [name, seed] : {std::pair{"alpha", 1}, std::pair{"beta", 2}}) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    REQUIRE(sim::save_checkpoint(sim::GaussianPolicy::create(rng, -0.5f), (dir / (std::string(name) + ".gwpl")).string()));
  }
  auto lib = load_policy_library(dir.string());
  REQUIRE(lib);
  return *lib;
}

struct Rig {
  explicit Rig(SceneSettings s = {}, PolicyLibrary policies = {})
      : settings(std::make_shared<SceneSettings>(std::move(s))),
        director(clock, ids, [this](Envelope e) {
          out.push_back(std::move(e));
          out_at.push_back(clock.now_ms());
        }) {
    REQUIRE(register_builtin_scenes(director, settings, std::move(policies)));
  }

  void load(const std::string& scene) {
    (void)director.route(make("scene.load", {{"scene", scene}}));
    advance(300);
    REQUIRE(director.active() == std::optional<std::string>(scene));
  }
  scene::RouteOutcome send(std::string type, nlohmann::json payload) { return director.route(make(std::move(type), std::move(payload))); }
  Envelope make(std::string type, nlohmann::json payload) {
    return protocol::make_envelope(client_ids, std::move(type), std::move(payload));
  }
  // One main-loop tick of 1/60 s.
  void tick() {
    now_us += 16667;
    clock.set(static_cast<Millis>(now_us / 1000));
    director.tick();
    if (auto* rt = director.active_runtime()) rt->step(1.0 / 60.0);
  }
  // Whole ticks covering ms of simulated time.
  void advance(Millis ms) {
    for (Millis i = 0; i < ms * 60 / 1000; ++i) tick();
  }
  std::vector<Envelope> of_type(const std::string& type) const {
    std::vector<Envelope> r;
    for (auto& e : out)
      if (e.type == type) r.push_back(e);
    return r;
  }
  int errors(const std::string& code) const {
    int n = 0;
    for (auto& e : of_type("protocol.error")) n += e.payload.value("code", "") == code;
    return n;
  }
  scene::SceneView view() {
    scene::SceneView v;
    director.active_runtime()->describe(v);
    return v;
  }

  VirtualClock clock{0};
  std::int64_t now_us = 0;
  protocol::IdGenerator ids{"edge", 1};
  protocol::IdGenerator client_ids{"web", 2};
  std::shared_ptr<SceneSettings> settings;
  std::vector<Envelope> out;
  std::vector<Millis> out_at;  // simulated emission time; Envelope::ts is wall time
  scene::SceneDirector director;
};

}  // namespace

TEST_CASE("control.move clamps degenerate values") {
  const ModeSpeeds modes;
  auto m = parse_move({{"dir", {3, 4}}, {"speed", 1e9}, {"mode", "run"}}, modes, 1.5);
  CHECK(m.speed == 1.5);
  CHECK(m.has_heading);
  CHECK(m.heading == doctest::Approx(std::atan2(4.0, 3.0)));
  CHECK(parse_move({{"speed", 1e9}}, modes, 1.5).speed == 0.8);
  CHECK(parse_move({{"speed", 1e9}, {"mode", "cross"}}, modes, 1.5).speed == 0.5);
  CHECK(parse_move({{"speed", 1e9}, {"mode", "run"}}, modes, 1.0).speed == 1.0);
  CHECK(parse_move({{"speed", -3}}, modes, 1.5).speed == 0.0);
  CHECK(parse_move({{"speed", std::numeric_limits<double>::quiet_NaN()}}, modes, 1.5).speed == 0.0);
  CHECK(parse_move({{"speed", "fast"}}, modes, 1.5).speed == 0.0);
  CHECK_FALSE(parse_move({{"dir", {0, 0}}, {"speed", 1}}, modes, 1.5).has_heading);
  CHECK(parse_move({{"speed", 1}, {"mode", "fly"}}, modes, 1.5).mode == "walk");
  CHECK(parse_move(nlohmann::json::array(), modes, 1.5).speed == 0.0);
}

TEST_CASE("settings reject bad values with the key") {
  Config cfg;
  cfg.set("tinkercoin.steps_per_tick", "0");
  auto s = SceneSettings::from_config(cfg);
  REQUIRE_FALSE(s);
  CHECK(s.error().key == "tinkercoin.steps_per_tick");
  Config cfg2;
  cfg2.set("robohetu.kp", "stiff");
  CHECK(SceneSettings::from_config(cfg2).error().key == "robohetu.kp");
}

TEST_CASE("builtin scenes resolve by alias") {
  Rig r;
  CHECK(*r.director.resolve("play") == kPlayground);
  CHECK(*r.director.resolve("hetu") == kRoboHeTu);
  CHECK(*r.director.resolve("robo") == kRoboHeTu);
  CHECK(*r.director.resolve("coin") == kTinkerCoin);
  CHECK(*r.director.resolve("tinker") == kTinkerCoin);
}

TEST_CASE("Playground switches policies") {
  TempDir dir;
  SceneSettings s;
  s.default_policy = "alpha";
  Rig r(s, two_policies(dir.path));
  r.load(kPlayground);
  auto statuses = r.of_type("scene.status");
  auto boot = std::find_if(statuses.begin(), statuses.end(), [](auto& e) { return e.payload.contains("policies"); });
  REQUIRE(boot != statuses.end());
  CHECK(boot->payload["policy"] == "alpha");
  CHECK(boot->payload["policies"] == nlohmann::json::array({"alpha", "beta"}));

  r.advance(200);
  const auto before = r.view();
  CHECK(r.send("policy.switch", {{"name", "beta"}}) == scene::RouteOutcome::Handled);
  CHECK(r.of_type("scene.status").back().payload["policy"] == "beta");
  // The switch alone leaves the body where it was.
  const auto after = r.view();
  CHECK(before.focus_x == after.focus_x);
  REQUIRE(before.shapes.size() == after.shapes.size());
  CHECK(before.shapes[2].x1 == after.shapes[2].x1);

  SUBCASE("switching to the current policy succeeds") {
    CHECK(r.send("policy.switch", {{"name", "beta"}}) == scene::RouteOutcome::Handled);
    CHECK(r.of_type("scene.status").back().payload["policy"] == "beta");
  }
  SUBCASE("unknown policy") {
    r.send("policy.switch", {{"name", "gamma"}});
    CHECK(r.errors("UnknownPolicy") == 1);
    r.send("policy.switch", {{"name", 3}});
    CHECK(r.errors("BadPayload") == 1);
  }
  SUBCASE("training is not Playground's") {
    r.send("training.set_flag", {{"training", true}});
    CHECK(r.errors("SceneMismatch") == 1);
  }
}

TEST_CASE("shipped policies act differently") {
  auto lib = load_policy_library(EDGEPLAY_POLICY_DIR);
  REQUIRE(lib);
  REQUIRE(lib->count("walker-v1"));
  REQUIRE(lib->count("walker-early"));
  // Action histograms over a fixed observation sweep.
  auto histogram = [](const sim::GaussianPolicy& p) {
    std::map<int, int> h;
    std::mt19937 rng(9);
    std::uniform_real_distribution<float> u(-0.3f, 0.3f);
    for (int i = 0; i < 2000; ++i) {
      sim::Observation o{};
      for (std::size_t k = 0; k + 1 < o.size(); ++k) o[k] = u(rng);
      const auto a = p.act_mean(o);
      ++h[static_cast<int>(std::floor(std::clamp(a[2], -1.f, 1.f) * 5))];
    }
    return h;
  };
  const auto a = histogram(*lib->at("walker-v1")), b = histogram(*lib->at("walker-early"));
  CHECK(a != b);
}

TEST_CASE("RoboHeTu tracks the commanded speed upright") {
  Rig r;
  r.load(kRoboHeTu);
  CHECK(r.send("control.move", {{"dir", {1, 0}}, {"speed", 1e9}, {"mode", "run"}}) == scene::RouteOutcome::Handled);
  r.advance(10000);
  const double x0 = *r.view().focus_x;
  r.advance(4000);
  const double x1 = *r.view().focus_x;
  // 1e9 clamps to 1.5 m/s.
  CHECK((x1 - x0) / 4.0 == doctest::Approx(1.5).epsilon(0.03));
  for (const char* mode : {"walk", "cross"}) {
    r.send("control.move", {{"dir", {1, 0}}, {"speed", 10}, {"mode", mode}});
    r.advance(10000);
    const double a = *r.view().focus_x;
    r.advance(4000);
    const double cap = std::string(mode) == "walk" ? 0.8 : 0.5;
    CHECK((*r.view().focus_x - a) / 4.0 == doctest::Approx(cap).epsilon(0.03));
  }
  r.send("control.move", {{"dir", {0, 1}}, {"speed", 0}});
  r.advance(3000);
  CHECK(r.of_type("telemetry.episode").empty());
  r.send("training.set_flag", {{"training", true}});
  CHECK(r.errors("SceneMismatch") == 1);
  r.send("policy.switch", {{"name", "walker-v1"}});
  CHECK(r.errors("Unsupported") == 1);
}

TEST_CASE("TinkerCoin training lifecycle") {
  TempDir dir;
  SceneSettings s;
  s.checkpoint_path = (dir.path / "latest.gwpl").string();
  s.task.schedule.compress = 50;
  s.train_steps_per_tick = 256;
  Rig r(s);
  r.load(kTinkerCoin);
  CHECK(r.send("training.set_flag", {{"training", true}}) == scene::RouteOutcome::Handled);
  CHECK(r.of_type("scene.status").back().payload["training"] == true);
  r.send("training.set_flag", {{"training", true}});
  CHECK(r.errors("TrainingAlreadyRunning") == 1);
  r.send("training.set_flag", {{"training", "yes"}});
  CHECK(r.errors("BadPayload") == 1);

  r.advance(8000);
  std::set<std::string> streams;
  for (auto& e : r.out)
    if (e.type.rfind("telemetry.", 0) == 0) streams.insert(e.type);
  CHECK(streams.count("telemetry.reward"));
  CHECK(streams.count("telemetry.episode"));
  CHECK(streams.count("telemetry.curriculum"));

  // Per-stream steps never decrease; curriculum values sit on the plateaus.
  std::map<std::string, std::int64_t> last;
  const std::set<double> plateaus{1.0, 0.8, 0.6, 0.4, 0.2, 0.0};
  double prev_lambda = 1.0;
  for (auto& e : r.out) {
    if (e.type.rfind("telemetry.", 0) != 0) continue;
    const auto step = e.payload["step"].get<std::int64_t>();
    CHECK(step >= last[e.type]);
    last[e.type] = step;
    if (e.type == "telemetry.curriculum") {
      const double v = e.payload["value"].get<double>();
      CHECK(plateaus.count(v) == 1);
      CHECK(v <= prev_lambda);
      prev_lambda = v;
    }
  }
  CHECK(prev_lambda < 1.0);

  // At most 10 samples per second per stream.
  std::map<std::string, std::vector<Millis>> times;
  for (std::size_t i = 0; i < r.out.size(); ++i)
    if (r.out[i].type.rfind("telemetry.", 0) == 0) times[r.out[i].type].push_back(r.out_at[i]);
  for (auto& [stream, ts] : times)
    for (std::size_t i = 10; i < ts.size(); ++i) CHECK_MESSAGE(ts[i] - ts[i - 10] >= 1000, stream);

  CHECK(r.send("training.set_flag", {{"training", false}}) == scene::RouteOutcome::Handled);
  CHECK(r.of_type("scene.status").back().payload["halting"] == true);
  for (int i = 0; i < 200 && !fs::exists(s.checkpoint_path); ++i) r.tick();
  REQUIRE(fs::exists(s.checkpoint_path));
  CHECK(sim::load_checkpoint(s.checkpoint_path));
  const auto st = r.of_type("scene.status").back().payload;
  CHECK(st["training"] == false);
  CHECK(st["checkpoint"] == s.checkpoint_path);

  // Restart after a halt is allowed.
  CHECK(r.send("training.set_flag", {{"training", true}}) == scene::RouteOutcome::Handled);
  CHECK(r.errors("TrainingAlreadyRunning") == 1);
}

TEST_CASE("TinkerCoin draws the assist arrow while lambda > 0") {
  SceneSettings s;
  Rig r(s);
  r.load(kTinkerCoin);
  r.advance(100);
  auto v = r.view();
  CHECK(v.assist_lambda == 1.0);
  CHECK(v.assist_tilt_rad == doctest::Approx(5.0 * 3.14159265358979 / 180.0));
  CHECK(v.focus_x.has_value());
}
