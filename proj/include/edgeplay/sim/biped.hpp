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

#include <array>
#include <cstdint>

#include "edgeplay/common/config.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/sim/curriculum.hpp"

namespace edgeplay::sim {

/// Planar biped abstraction. The robot is a point-foot base (legs) carrying
/// a torso on a passive spring hip; sagittal and lateral motion are two
/// cart-pendulum planes sharing the same body. Four actuated inputs: hip
/// pitch torque, hip roll torque, forward and lateral stance drive.
struct BipedParams {
  double torso_mass = 9.5;  // kg
  double leg_mass = 0.5;
  double torso_height = 0.35;  // hip to torso centre, m
  double pitch_stiffness = 20.0;  // N m / rad
  double pitch_damping = 4.0;
  double roll_stiffness = 70.0;
  double roll_damping = 6.0;
  double max_torque = 6.0;  // N m at |action| = 1
  double max_speed = 1.5;  // m/s
  double drive_gain = 8.0;  // 1/s, stance velocity servo
  double friction = 0.8;  // Coulomb mu at the foot
  double fall_threshold = 0.6;  // rad, pitch or roll
  double gravity = 9.81;
  double dt = 1.0 / 60.0;

  double mass() const { return torso_mass + leg_mass; }
  static Result<BipedParams, BadConfig> from_config(const Config& cfg);
};

/// One plane: base position and velocity, torso angle and rate.
struct PlaneState {
  double x = 0, v = 0;
  double angle = 0, rate = 0;
  friend bool operator==(const PlaneState&, const PlaneState&) = default;
};

constexpr std::size_t kActionDim = 4;
constexpr std::size_t kObsDim = 7;
using Action = std::array<float, kActionDim>;
using Observation = std::array<float, kObsDim>;

struct BipedState {
  PlaneState pitch;  // sagittal plane, along the heading
  PlaneState roll;   // lateral plane
  double heading = 0;  // yaw, (-pi, pi]
  double world_x = 0, world_y = 0;  // base position

  friend bool operator==(const BipedState&, const BipedState&) = default;
};

class Biped {
 public:
  explicit Biped(BipedParams params = {}) : p_(params) {}

  const BipedParams& params() const { return p_; }
  const BipedState& state() const { return s_; }
  BipedState& state() { return s_; }
  void reset(const BipedState& s = {}) { s_ = s; }

  /// One semi-implicit Euler step. Actions are clamped to [-1, 1]; assist is
  /// a world-frame force applied at the torso.
  void step(const Action& action, const Vec3& assist);

  bool upright() const;
  /// Torso centre in world coordinates, z up.
  Vec3 torso_position() const;
  double forward_speed() const { return s_.pitch.v; }
  Observation observe(float lambda_feature = 0.f) const;

  /// Mechanical energy of the toy: both planes' kinetic energy, torso
  /// gravity potential and hip spring potential. Non-increasing with zero
  /// actions and no assist, up to integrator error.
  double energy() const;

  void set_heading(double heading);

 private:
  void step_plane(PlaneState& s, double k, double c, double torque, double v_target, double f_horizontal,
                  double f_up, double normal) const;

  BipedParams p_;
  BipedState s_;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace edgeplay::sim
