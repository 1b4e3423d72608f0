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

#include "edgeplay/sim/task.hpp"

#include <algorithm>
#include <cmath>

namespace edgeplay::sim {

Result<RewardWeights, BadConfig> RewardWeights::from_config(const Config& cfg) {
  RewardWeights w;
  for (auto [key, field] : {std::pair{"reward.forward", &w.forward}, std::pair{"reward.upright", &w.upright},
                            std::pair{"reward.coin", &w.coin}, std::pair{"reward.fall", &w.fall},
                            std::pair{"reward.effort", &w.effort}}) {
    auto v = cfg.get_double(key, *field);
    if (!v) return unexpected(v.error());
    *field = *v;
  }
  return w;
}

Result<CoinLayout, BadConfig> CoinLayout::from_config(const Config& cfg) {
  CoinLayout c;
  auto count = cfg.get_int("coins.count", c.count);
  if (!count) return unexpected(count.error());
  if (*count < 0) return unexpected(BadConfig{0, "coins.count", "must be >= 0"});
  c.count = static_cast<int>(*count);
  for (auto [key, field] : {std::pair{"coins.first", &c.first}, std::pair{"coins.spacing", &c.spacing},
                            std::pair{"coins.radius", &c.radius}}) {
    auto v = cfg.get_double(key, *field);
    if (!v) return unexpected(v.error());
    *field = *v;
  }
  auto respawn = cfg.get_bool("coins.respawn", c.respawn);
  if (!respawn) return unexpected(respawn.error());
  c.respawn = *respawn;
  if (c.radius < 0) return unexpected(BadConfig{0, "coins.radius", "must be >= 0"});
  return c;
}

void CoinField::lay_out(double x0, double y0, double heading) {
  coins_.clear();
  for (int i = 0; i < layout_.count; ++i) {
    const double d = layout_.first + layout_.spacing * i;
    coins_.push_back({x0 + d * std::cos(heading), y0 + d * std::sin(heading), false});
  }
}

int CoinField::collect(double x, double y) {
  int picked = 0;
  const double r2 = layout_.radius * layout_.radius;
  for (auto& c : coins_) {
    if (c.collected) continue;
    const double dx = c.x - x, dy = c.y - y;
    if (dx * dx + dy * dy <= r2) {
      c.collected = true;
      ++picked;
    }
  }
  return picked;
}

int CoinField::remaining() const {
  return static_cast<int>(std::count_if(coins_.begin(), coins_.end(), [](const Coin& c) { return !c.collected; }));
}

std::string_view to_string(TerminalCause c) {
  switch (c) {
    case TerminalCause::Fell: return "fell";
    case TerminalCause::Horizon: return "horizon";
    case TerminalCause::Reset: return "reset";
  }
  return "?";
}

LocomotionTask::LocomotionTask(BipedParams body, RewardWeights reward, CoinLayout coins, CurriculumSchedule sched,
                               int horizon, std::uint64_t seed)
    : biped_(body), reward_(reward), coins_(coins), sched_(sched), horizon_(horizon), rng_(seed * 7 + 1) {}

void LocomotionTask::reset() {
  std::normal_distribution<double> noise(0, 0.05);
  BipedState s;
  s.heading = biped_.state().heading;
  s.pitch.angle = noise(rng_);
  s.roll.angle = noise(rng_);
  s.pitch.rate = noise(rng_);
  s.roll.rate = noise(rng_);
  biped_.reset(s);
  t_ = 0;
  episode_reward_ = 0;
  episode_coins_ = 0;
  if (coins_.layout().respawn || coins_.coins().empty()) coins_.lay_out(0, 0, s.heading);
}

StepOutcome LocomotionTask::step(const Action& action, double lambda) {
  lambda_ = lambda;
  last_assist_ = assist_force(biped_.state().heading, biped_.params().mass(), lambda, sched_);
  biped_.step(action, last_assist_);
  ++t_;
  StepOutcome out;
  double effort = 0;
  for (float a : action) {
    const double u = std::clamp<double>(a, -1.0, 1.0);
    effort += u * u;
  }
  out.reward = biped_.forward_speed() * reward_.forward + reward_.upright - reward_.effort * effort;
  const Vec3 torso = biped_.torso_position();
  out.coins = coins_.collect(torso.x, torso.y);
  out.reward += reward_.coin * out.coins;
  out.fell = !biped_.upright();
  if (out.fell) out.reward -= reward_.fall;
  out.done = out.fell || t_ >= horizon_;
  episode_reward_ += out.reward;
  episode_coins_ += out.coins;
  return out;
}

}  // namespace edgeplay::sim
