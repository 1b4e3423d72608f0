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

#include <map>
#include <memory>
#include <string>

#include "edgeplay/common/config.hpp"
#include "edgeplay/scene/director.hpp"
#include "edgeplay/sim/policy.hpp"
#include "edgeplay/sim/trainer.hpp"

namespace edgeplay::scenes {

inline constexpr const char* kPlayground = "Playground";
inline constexpr const char* kRoboHeTu = "RoboHeTu";
inline constexpr const char* kTinkerCoin = "TinkerCoin";

/// Max speed per locomotion mode, m/s; always clamped to physics.max_speed.
struct ModeSpeeds {
  double walk = 0.8;
  double run = 1.5;
  double cross = 0.5;
};

/// Balance-and-track controller for RoboHeTu. Torque and stance-drive
/// feedback on torso angle and rate, plus velocity feed-forward.
struct PdGains {
  double kp = 30.0;  // hip torque per rad
  double kd = 2.0;  // hip torque per rad/s
  double lean = 1.5;  // stance speed per rad of lean
  double lean_rate = 0.1;  // stance speed per rad/s
};

struct SceneSettings {
  sim::TaskConfig task;
  sim::TrainerConfig trainer;
  std::string policy_dir;
  std::string default_policy = "walker-v1";
  ModeSpeeds modes;
  PdGains gains;
  int train_steps_per_tick = 256;
  std::string checkpoint_path = "tinkercoin-latest.gwpl";
  double telemetry_rate = 10.0;

  /// Every scene key lives under physics., reward., coins., curriculum.,
  /// trainer., playground., robohetu., tinkercoin. or telemetry.
  static Result<SceneSettings, BadConfig> from_config(const Config& cfg);
};

using PolicyLibrary = std::map<std::string, std::shared_ptr<const sim::GaussianPolicy>>;

/// Loads every *.gwpl in dir, keyed by file stem.
Result<PolicyLibrary, sim::CheckpointError> load_policy_library(const std::string& dir);

/// Registers Playground (alias "play"), RoboHeTu ("hetu", "robo") and
/// TinkerCoin ("tinker", "coin").
Result<void, scene::SceneError> register_builtin_scenes(scene::SceneDirector& director,
                                                        std::shared_ptr<const SceneSettings> settings,
                                                        PolicyLibrary policies);

/// Parses a control.move payload {dir: [x, y], speed, mode}. Degenerate
/// values are clamped: non-finite numbers become 0, dir is normalised (a
/// zero dir keeps the current heading), speed is clamped to
/// [0, min(mode speed, max_speed)].
struct MoveCommand {
  bool has_heading = false;
  double heading = 0;
  double speed = 0;
  std::string mode = "walk";
};
MoveCommand parse_move(const nlohmann::json& payload, const ModeSpeeds& modes, double max_speed);

}  // namespace edgeplay::scenes
