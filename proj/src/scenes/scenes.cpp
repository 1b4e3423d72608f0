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

#include "edgeplay/scenes/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "edgeplay/sim/telemetry.hpp"

namespace edgeplay::scenes {

using protocol::Envelope;
using scene::HandleOutcome;
using scene::SceneContext;
using scene::SceneView;
using scene::Shape;

Result<SceneSettings, BadConfig> SceneSettings::from_config(const Config& cfg) {
  SceneSettings s;
#ifdef EDGEPLAY_POLICY_DIR
  s.policy_dir = EDGEPLAY_POLICY_DIR;
#endif
  auto task = sim::TaskConfig::from_config(cfg);
  if (!task) return unexpected(task.error());
  auto trainer = sim::TrainerConfig::from_config(cfg);
  if (!trainer) return unexpected(trainer.error());
  s.task = *task;
  s.trainer = *trainer;
  s.policy_dir = cfg.get_string("playground.policy_dir", s.policy_dir);
  s.default_policy = cfg.get_string("playground.default_policy", s.default_policy);
  s.checkpoint_path = cfg.get_string("tinkercoin.checkpoint_path", s.checkpoint_path);
  for (auto [key, field] :
       {std::pair{"robohetu.walk_speed", &s.modes.walk}, std::pair{"robohetu.run_speed", &s.modes.run},
        std::pair{"robohetu.cross_speed", &s.modes.cross}, std::pair{"robohetu.kp", &s.gains.kp},
        std::pair{"robohetu.kd", &s.gains.kd}, std::pair{"robohetu.lean", &s.gains.lean},
        std::pair{"robohetu.lean_rate", &s.gains.lean_rate}, std::pair{"telemetry.rate_hz", &s.telemetry_rate}}) {
    auto v = cfg.get_double(key, *field);
    if (!v) return unexpected(v.error());
    *field = *v;
  }
  auto budget = cfg.get_int("tinkercoin.steps_per_tick", s.train_steps_per_tick);
  if (!budget) return unexpected(budget.error());
  if (*budget <= 0) return unexpected(BadConfig{0, "tinkercoin.steps_per_tick", "must be > 0"});
  s.train_steps_per_tick = static_cast<int>(*budget);
  if (s.telemetry_rate <= 0) return unexpected(BadConfig{0, "telemetry.rate_hz", "must be > 0"});
  return s;
}

Result<PolicyLibrary, sim::CheckpointError> load_policy_library(const std::string& dir) {
  PolicyLibrary lib;
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) return unexpected(sim::CheckpointError{sim::CheckpointErrc::Io, "cannot list " + dir});
  for (const auto& entry : it) {
    if (entry.path().extension() != ".gwpl") continue;
    auto p = sim::load_checkpoint(entry.path().string());
    if (!p) return unexpected(sim::CheckpointError{p.error().code, entry.path().string() + ": " + p.error().detail});
    lib[entry.path().stem().string()] = std::make_shared<const sim::GaussianPolicy>(std::move(*p));
  }
  return lib;
}

MoveCommand parse_move(const nlohmann::json& payload, const ModeSpeeds& modes, double max_speed) {
  MoveCommand m;
  auto number = [](const nlohmann::json& v) {
    if (!v.is_number()) return 0.0;
    const double d = v.get<double>();
    return std::isfinite(d) ? d : 0.0;
  };
  if (payload.is_object()) {
    if (auto it = payload.find("mode"); it != payload.end() && it->is_string()) {
      const auto mode = it->get<std::string>();
      if (mode == "walk" || mode == "run" || mode == "cross") m.mode = mode;
    }
    if (auto it = payload.find("dir"); it != payload.end() && it->is_array() && it->size() == 2) {
      const double x = number((*it)[0]), y = number((*it)[1]);
      if (std::hypot(x, y) > 1e-9) {
        m.has_heading = true;
        m.heading = std::atan2(y, x);
      }
    }
    if (auto it = payload.find("speed"); it != payload.end()) m.speed = number(*it);
  }
  const double cap = std::min(m.mode == "run" ? modes.run : m.mode == "cross" ? modes.cross : modes.walk, max_speed);
  m.speed = std::clamp(m.speed, 0.0, cap);
  return m;
}

namespace {

constexpr double kHipHeight = 0.45;  // drawing only

void draw_ground(SceneView& view, double x, bool bumps) {
  view.shapes.push_back({Shape::Kind::Box, x - 50, -2.0, x + 50, 0.0, 0, 96, 140, 72});
  if (!bumps) return;
  // Height-field strip for the cross-terrain mode, fixed in the world.
  for (int i = 0; i < 40; ++i) {
    const double bx = 4.0 + 0.5 * i;
    const double h = 0.04 + 0.04 * std::abs(std::sin(1.7 * i));
    view.shapes.push_back({Shape::Kind::Box, bx, 0.0, bx + 0.35, h, 0, 120, 100, 70});
  }
}

void draw_biped(SceneView& view, const sim::Biped& body, double assist_lambda, double tilt_rad) {
  const auto& s = body.state();
  const double l = body.params().torso_height;
  const double bx = s.world_x * std::cos(s.heading) + s.world_y * std::sin(s.heading);
  const double stride = 0.15 * std::sin(4.0 * s.pitch.x);
  view.shapes.push_back({Shape::Kind::Segment, bx, kHipHeight, bx + stride, 0.0, 0.05, 40, 40, 40});
  view.shapes.push_back({Shape::Kind::Segment, bx, kHipHeight, bx - stride, 0.0, 0.05, 70, 70, 70});
  const double tx = bx + 2 * l * std::sin(s.pitch.angle), tz = kHipHeight + 2 * l * std::cos(s.pitch.angle);
  const bool up = body.upright();
  view.shapes.push_back(
      {Shape::Kind::Segment, bx, kHipHeight, tx, tz, 0.09, static_cast<std::uint8_t>(up ? 40 : 200), 60, 160});
  view.shapes.push_back({Shape::Kind::Disc, tx, tz + 0.08, 0, 0, 0.08, 230, 190, 150});
  view.focus_x = bx;
  view.assist_lambda = assist_lambda;
  view.assist_x = bx + l * std::sin(s.pitch.angle);
  view.assist_z = kHipHeight + l * std::cos(s.pitch.angle);
  view.assist_tilt_rad = tilt_rad;
}

void draw_coins(SceneView& view, const sim::CoinField& coins, double heading) {
  for (const auto& c : coins.coins()) {
    if (c.collected) continue;
    const double cx = c.x * std::cos(heading) + c.y * std::sin(heading);
    view.shapes.push_back({Shape::Kind::Disc, cx, kHipHeight + 0.2, 0, 0, 0.12, 240, 200, 40});
  }
}

HandleOutcome bad_payload(const std::string& why) { return HandleOutcome::rejected("BadPayload", why); }

HandleOutcome training_elsewhere(const std::string& scene) {
  return HandleOutcome::rejected("SceneMismatch", std::string("training runs in ") + kTinkerCoin + ", not " + scene);
}

/// Shared fixed-step driver and telemetry plumbing.
class BipedScene : public scene::SceneRuntime {
 public:
  BipedScene(const SceneContext& ctx, std::shared_ptr<const SceneSettings> settings, sim::BipedParams body)
      : ctx_(ctx),
        settings_(std::move(settings)),
        body_(body),
        limiter_(*ctx.clock, settings_->telemetry_rate,
                 [this](const std::string& stream, const nlohmann::json& p) { ctx_.emit(stream, p); }) {}

  void step(double dt) override {
    accum_ += dt;
    const double h = body_.params().dt;
    while (accum_ >= h) {
      accum_ -= h;
      physics_step();
    }
    limiter_.flush();
  }

 protected:
  virtual void physics_step() = 0;

  void status(nlohmann::json extra, const char* name) {
    extra["scene"] = name;
    extra["status"] = "Active";
    ctx_.emit("scene.status", std::move(extra));
  }

  SceneContext ctx_;
  std::shared_ptr<const SceneSettings> settings_;
  sim::Biped body_;
  sim::TelemetryLimiter limiter_;
  double accum_ = 0;
  std::int64_t steps_ = 0;
  std::int64_t episodes_ = 0;
};

class Playground final : public BipedScene {
 public:
  Playground(const SceneContext& ctx, std::shared_ptr<const SceneSettings> settings, PolicyLibrary policies)
      : BipedScene(ctx, settings, settings->task.body), policies_(std::move(policies)) {
    if (policies_.count(settings_->default_policy)) {
      active_ = settings_->default_policy;
    } else if (!policies_.empty()) {
      active_ = policies_.begin()->first;
    }
  }

  HandleOutcome handle(const Envelope& env) override {
    if (env.type == "control.move") {
      auto m = parse_move(env.payload, settings_->modes, body_.params().max_speed);
      if (m.has_heading) body_.set_heading(m.heading);
      return HandleOutcome::handled();
    }
    if (env.type == "policy.switch") {
      if (!env.payload.is_object() || !env.payload.contains("name") || !env.payload["name"].is_string())
        return bad_payload("policy.switch needs {name}");
      const auto name = env.payload["name"].get<std::string>();
      if (!policies_.count(name)) return HandleOutcome::rejected("UnknownPolicy", "no policy named " + name);
      active_ = name;
      if (env.payload.value("reset", false)) reset();
      status({{"policy", active_}}, kPlayground);
      return HandleOutcome::handled();
    }
    if (env.type == "training.set_flag") return training_elsewhere(kPlayground);
    return HandleOutcome::unsupported(env.type + " is not supported by " + kPlayground);
  }

  void on_activate(scene::Camera& camera) override {
    camera.center_z = 0.6;
    reset();
    status({{"policy", active_}, {"policies", policy_names()}}, kPlayground);
  }

  void describe(SceneView& view) const override {
    draw_ground(view, body_.torso_position().x, false);
    draw_biped(view, body_, 0.0, 0.0);
  }

  const std::string& active_policy() const { return active_; }

 private:
  void reset() {
    sim::BipedState s;
    s.heading = body_.state().heading;
    body_.reset(s);
    episode_steps_ = 0;
  }

  nlohmann::json policy_names() const {
    auto names = nlohmann::json::array();
    for (auto& [n, _] : policies_) names.push_back(n);
    return names;
  }

  void physics_step() override {
    sim::Action a{};
    if (auto it = policies_.find(active_); it != policies_.end()) a = it->second->act_mean(body_.observe());
    body_.step(a, {});
    ++steps_;
    ++episode_steps_;
    if (!body_.upright() || episode_steps_ >= settings_->trainer.horizon) {
      limiter_.offer("telemetry.episode", {{"step", steps_},
                                           {"value", episode_steps_},
                                           {"cause", body_.upright() ? "horizon" : "fell"},
                                           {"policy", active_}});
      ++episodes_;
      reset();
    }
  }

  PolicyLibrary policies_;
  std::string active_;
  int episode_steps_ = 0;
};

class RoboHeTu final : public BipedScene {
 public:
  RoboHeTu(const SceneContext& ctx, std::shared_ptr<const SceneSettings> settings)
      : BipedScene(ctx, settings, settings->task.body) {}

  HandleOutcome handle(const Envelope& env) override {
    if (env.type == "control.move") {
      auto m = parse_move(env.payload, settings_->modes, body_.params().max_speed);
      if (m.has_heading) body_.set_heading(m.heading);
      target_speed_ = m.speed;
      mode_ = m.mode;
      return HandleOutcome::handled();
    }
    if (env.type == "training.set_flag") return training_elsewhere(kRoboHeTu);
    return HandleOutcome::unsupported(env.type + " is not supported by " + kRoboHeTu);
  }

  void on_activate(scene::Camera& camera) override {
    camera.center_z = 0.6;
    camera.pixels_per_metre = 60.0;
    status({{"mode", mode_}}, kRoboHeTu);
  }

  void describe(SceneView& view) const override {
    draw_ground(view, body_.torso_position().x, true);
    draw_biped(view, body_, 0.0, 0.0);
  }

  double target_speed() const { return target_speed_; }

 private:
  void physics_step() override {
    const auto& s = body_.state();
    const auto& p = body_.params();
    const auto& k = settings_->gains;
    sim::Action a{};
    a[0] = static_cast<float>((-k.kp * s.pitch.angle - k.kd * s.pitch.rate) / p.max_torque);
    a[1] = static_cast<float>((-k.kp * s.roll.angle - k.kd * s.roll.rate) / p.max_torque);
    a[2] = static_cast<float>((target_speed_ + k.lean * s.pitch.angle + k.lean_rate * s.pitch.rate) / p.max_speed);
    a[3] = static_cast<float>((k.lean * s.roll.angle + k.lean_rate * s.roll.rate) / (0.3 * p.max_speed));
    body_.step(a, {});
    ++steps_;
    if (!body_.upright()) {
      ++episodes_;
      limiter_.offer("telemetry.episode", {{"step", steps_}, {"value", episodes_}, {"cause", "fell"}, {"mode", mode_}});
      sim::BipedState fresh;
      fresh.heading = s.heading;
      fresh.world_x = s.world_x;
      fresh.world_y = s.world_y;
      body_.reset(fresh);
    }
  }

  double target_speed_ = 0;
  std::string mode_ = "walk";
};

class TinkerCoin final : public scene::SceneRuntime {
 public:
  TinkerCoin(const SceneContext& ctx, std::shared_ptr<const SceneSettings> settings)
      : ctx_(ctx),
        settings_(std::move(settings)),
        trainer_(settings_->trainer, settings_->task),
        limiter_(*ctx.clock, settings_->telemetry_rate,
                 [this](const std::string& stream, const nlohmann::json& p) { ctx_.emit(stream, p); }) {
    trainer_.on_episode = [this](const sim::EpisodeRecord& r) {
      limiter_.offer("telemetry.reward", {{"step", r.end_step}, {"value", r.cumulative_reward}});
      limiter_.offer("telemetry.episode", {{"step", r.end_step},
                                           {"value", r.length},
                                           {"episode", r.index},
                                           {"coins", r.coins},
                                           {"cause", sim::to_string(r.cause)}});
    };
    trainer_.on_coin = [this](int coins) {
      ++coins_total_;
      limiter_.offer("telemetry.coin", {{"step", trainer_.global_step()}, {"value", coins}, {"total", coins_total_}});
    };
  }

  HandleOutcome handle(const Envelope& env) override {
    if (env.type == "training.set_flag") {
      if (!env.payload.is_object() || !env.payload.contains("training") || !env.payload["training"].is_boolean())
        return bad_payload("training.set_flag needs {training: bool}");
      const bool on = env.payload["training"].get<bool>();
      if (on) {
        if (training_ && !trainer_.halt_requested())
          return HandleOutcome::rejected("TrainingAlreadyRunning", "training is already running");
        training_ = true;
        trainer_.resume();
      } else if (training_) {
        trainer_.request_halt();
      }
      status();
      return HandleOutcome::handled();
    }
    if (env.type == "control.move") {
      auto m = parse_move(env.payload, settings_->modes, settings_->task.body.max_speed);
      if (m.has_heading) trainer_.task().biped().set_heading(m.heading);
      return HandleOutcome::handled();
    }
    return HandleOutcome::unsupported(env.type + " is not supported by " + kTinkerCoin);
  }

  void step(double dt) override {
    if (training_) {
      trainer_.advance(settings_->train_steps_per_tick);
      if (trainer_.halted()) {
        training_ = false;
        auto saved = sim::save_checkpoint(trainer_.policy(), settings_->checkpoint_path);
        checkpoint_error_ = saved ? "" : saved.error().detail;
        status();
      }
    } else {
      accum_ += dt;
      const double h = settings_->task.body.dt;
      while (accum_ >= h) {
        accum_ -= h;
        auto& task = trainer_.task();
        auto out = task.step(trainer_.policy().act_mean(task.biped().observe()), trainer_.lambda());
        if (out.done) task.reset();
      }
    }
    limiter_.offer("telemetry.curriculum", {{"step", trainer_.global_step()}, {"value", trainer_.lambda()}});
    limiter_.flush();
  }

  void on_activate(scene::Camera& camera) override {
    camera.center_z = 0.7;
    status();
  }

  void on_deactivate() override {
    if (training_) (void)sim::save_checkpoint(trainer_.policy(), settings_->checkpoint_path);
  }

  void describe(SceneView& view) const override {
    const auto& task = trainer_.task();
    draw_ground(view, task.biped().torso_position().x, false);
    draw_coins(view, task.coins(), task.biped().state().heading);
    draw_biped(view, task.biped(), task.lambda(), task.schedule().tilt_deg * std::numbers::pi / 180.0);
  }

  const sim::PpoTrainer& trainer() const { return trainer_; }
  bool training() const { return training_; }

 private:
  void status() {
    nlohmann::json p{{"scene", kTinkerCoin},
                     {"status", "Active"},
                     {"training", training_},
                     {"halting", training_ && trainer_.halt_requested()},
                     {"step", trainer_.global_step()},
                     {"lambda", trainer_.lambda()}};
    if (!training_ && trainer_.global_step() > 0) p["checkpoint"] = settings_->checkpoint_path;
    if (!checkpoint_error_.empty()) p["checkpoint_error"] = checkpoint_error_;
    ctx_.emit("scene.status", std::move(p));
  }

  SceneContext ctx_;
  std::shared_ptr<const SceneSettings> settings_;
  sim::PpoTrainer trainer_;
  sim::TelemetryLimiter limiter_;
  bool training_ = false;
  double accum_ = 0;
  std::int64_t coins_total_ = 0;
  std::string checkpoint_error_;
};

}  // namespace

Result<void, scene::SceneError> register_builtin_scenes(scene::SceneDirector& director,
                                                        std::shared_ptr<const SceneSettings> settings,
                                                        PolicyLibrary policies) {
  if (auto r = director.register_scene(kPlayground, {"play"},
                                       [settings, policies](const SceneContext& ctx) {
                                         return std::make_unique<Playground>(ctx, settings, policies);
                                       });
      !r)
    return r;
  if (auto r = director.register_scene(
          kRoboHeTu, {"hetu", "robo"},
          [settings](const SceneContext& ctx) { return std::make_unique<RoboHeTu>(ctx, settings); });
      !r)
    return r;
  return director.register_scene(kTinkerCoin, {"tinker", "coin"}, [settings](const SceneContext& ctx) {
    return std::make_unique<TinkerCoin>(ctx, settings);
  });
}

}  // namespace edgeplay::scenes
