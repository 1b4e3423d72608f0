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

#include "edgeplay/sim/biped.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgeplay::sim {

Result<BipedParams, BadConfig> BipedParams::from_config(const Config& cfg) {
  BipedParams p;
  for (auto [key, field] : {std::pair{"physics.torso_mass", &p.torso_mass}, std::pair{"physics.leg_mass", &p.leg_mass},
                            std::pair{"physics.torso_height", &p.torso_height},
                            std::pair{"physics.pitch_stiffness", &p.pitch_stiffness},
                            std::pair{"physics.pitch_damping", &p.pitch_damping},
                            std::pair{"physics.roll_stiffness", &p.roll_stiffness},
                            std::pair{"physics.roll_damping", &p.roll_damping},
                            std::pair{"physics.max_torque", &p.max_torque}, std::pair{"physics.max_speed", &p.max_speed},
                            std::pair{"physics.drive_gain", &p.drive_gain}, std::pair{"physics.mu", &p.friction},
                            std::pair{"physics.fall_threshold", &p.fall_threshold},
                            std::pair{"physics.gravity", &p.gravity}}) {
    auto v = cfg.get_double(key, *field);
    if (!v) return unexpected(v.error());
    *field = *v;
  }
  auto hz = cfg.get_double("physics.rate_hz", 1.0 / p.dt);
  if (!hz) return unexpected(hz.error());
  if (*hz <= 0) return unexpected(BadConfig{0, "physics.rate_hz", "must be > 0"});
  p.dt = 1.0 / *hz;
  if (p.torso_mass <= 0 || p.leg_mass <= 0) return unexpected(BadConfig{0, "physics.torso_mass", "masses must be > 0"});
  if (p.max_speed <= 0) return unexpected(BadConfig{0, "physics.max_speed", "must be > 0"});
  return p;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a, 2 * pi);
  if (a <= -pi) a += 2 * pi;
  if (a > pi) a -= 2 * pi;
  return a;
}

void Biped::set_heading(double heading) { s_.heading = wrap_angle(heading); }

void Biped::step_plane(PlaneState& s, double k, double c, double torque, double v_target, double f_horizontal,
                       double f_up, double normal) const {
  const double M = p_.leg_mass, m = p_.torso_mass, l = p_.torso_height;
  const double sa = std::sin(s.angle), ca = std::cos(s.angle);
  // Stance drive: velocity servo at the foot, capped by Coulomb friction.
  // Scaled by the base's reduced mass M + m sin^2 so the servo rate is
  // drive_gain whatever the mass split; a (M + m) scale makes explicit
  // integration unstable for a light base.
  double f_foot = (M + m * sa * sa) * p_.drive_gain * (v_target - s.v);
  const double cap = p_.friction * std::max(0.0, normal);
  f_foot = std::clamp(f_foot, -cap, cap);
  const double hip = torque - k * s.angle - c * s.rate;
  // Cart-pendulum equations with the assist applied at the torso:
  // [M+m, m l ca; m l ca, m l^2] [xdd; add] = [b1; b2]
  const double a11 = M + m, a12 = m * l * ca, a22 = m * l * l;
  const double b1 = f_foot + f_horizontal + m * l * s.rate * s.rate * sa;
  const double b2 = (m * p_.gravity - f_up) * l * sa + hip + f_horizontal * l * ca;
  const double det = a11 * a22 - a12 * a12;
  const double xdd = (b1 * a22 - a12 * b2) / det;
  const double add = (a11 * b2 - a12 * b1) / det;
  s.v += xdd * p_.dt;
  s.x += s.v * p_.dt;
  s.rate += add * p_.dt;
  s.angle += s.rate * p_.dt;
}

void Biped::step(const Action& action, const Vec3& assist) {
  double u[kActionDim];
  for (std::size_t i = 0; i < kActionDim; ++i) u[i] = std::clamp<double>(action[i], -1.0, 1.0);
  const double ch = std::cos(s_.heading), sh = std::sin(s_.heading);
  const double f_forward = assist.x * ch + assist.y * sh;
  const double f_lateral = -assist.x * sh + assist.y * ch;
  const double normal = p_.mass() * p_.gravity - assist.z;
  const double px0 = s_.pitch.x, rx0 = s_.roll.x;
  step_plane(s_.pitch, p_.pitch_stiffness, p_.pitch_damping, u[0] * p_.max_torque, u[2] * p_.max_speed, f_forward,
             assist.z, normal);
  step_plane(s_.roll, p_.roll_stiffness, p_.roll_damping, u[1] * p_.max_torque, u[3] * p_.max_speed * 0.3, f_lateral,
             assist.z, normal);
  const double dx = s_.pitch.x - px0, dy = s_.roll.x - rx0;
  s_.world_x += dx * ch - dy * sh;
  s_.world_y += dx * sh + dy * ch;
}

bool Biped::upright() const {
  return std::abs(s_.pitch.angle) <= p_.fall_threshold && std::abs(s_.roll.angle) <= p_.fall_threshold;
}

Vec3 Biped::torso_position() const {
  const double l = p_.torso_height;
  const double fwd = l * std::sin(s_.pitch.angle), lat = l * std::sin(s_.roll.angle);
  const double ch = std::cos(s_.heading), sh = std::sin(s_.heading);
  return {s_.world_x + fwd * ch - lat * sh, s_.world_y + fwd * sh + lat * ch,
          l * std::cos(s_.pitch.angle) * std::cos(s_.roll.angle)};
}

Observation Biped::observe(float lambda_feature) const {
  return {static_cast<float>(s_.pitch.angle), static_cast<float>(s_.pitch.rate * 0.3),
          static_cast<float>(s_.roll.angle),  static_cast<float>(s_.roll.rate * 0.3),
          static_cast<float>(s_.pitch.v),     static_cast<float>(s_.roll.v),
          lambda_feature};
}

double Biped::energy() const {
  const double M = p_.leg_mass, m = p_.torso_mass, l = p_.torso_height;
  auto plane = [&](const PlaneState& s, double k) {
    const double kinetic = 0.5 * (M + m) * s.v * s.v + m * l * std::cos(s.angle) * s.v * s.rate +
                           0.5 * m * l * l * s.rate * s.rate;
    return kinetic + m * p_.gravity * l * std::cos(s.angle) + 0.5 * k * s.angle * s.angle;
  };
  return plane(s_.pitch, p_.pitch_stiffness) + plane(s_.roll, p_.roll_stiffness);
}

}  // namespace edgeplay::sim
