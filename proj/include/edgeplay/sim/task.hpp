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

#include <cstdint>
#include <random>
#include <vector>

#include "edgeplay/common/config.hpp"
#include "edgeplay/sim/biped.hpp"
#include "edgeplay/sim/curriculum.hpp"

namespace edgeplay::sim {

struct RewardWeights {
  double forward = 1.0;  // per step, per m/s of forward speed
  double upright = 0.05;  // per step
  double coin = 10.0;
  double fall = 100.0;  // subtracted once on a fall
  double effort = 0.001;  // times |action|^2

  static Result<RewardWeights, BadConfig> from_config(const Config& cfg);
};

/// Coins on a line ahead of the start pose. Pickup is a closed disc around
/// the torso's ground projection.
struct CoinLayout {
  int count = 5;
  double first = 1.5;  // m ahead of the start
  double spacing = 2.0;
  double radius = 0.3;
  bool respawn = true;  // restore all coins at each episode reset

  static Result<CoinLayout, BadConfig> from_config(const Config& cfg);
};

struct Coin {
  double x = 0, y = 0;
  bool collected = false;
};

class CoinField {
 public:
  explicit CoinField(CoinLayout layout = {}) : layout_(layout) {}
  /// Lays the coins out along heading from (x0, y0).
  void lay_out(double x0, double y0, double heading);
  void place(std::vector<Coin> coins) { coins_ = std::move(coins); }
  /// Removes and counts every coin within radius of (x, y).
  int collect(double x, double y);
  const std::vector<Coin>& coins() const { return coins_; }
  int remaining() const;
  const CoinLayout& layout() const { return layout_; }

 private:
  CoinLayout layout_;
  std::vector<Coin> coins_;
};

enum class TerminalCause { Fell, Horizon, Reset };
std::string_view to_string(TerminalCause c);

struct EpisodeRecord {
  std::int64_t index = 0;
  double cumulative_reward = 0;
  int length = 0;
  int coins = 0;
  TerminalCause cause = TerminalCause::Horizon;
  std::int64_t end_step = 0;  // global step at which the episode ended

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct StepOutcome {
  double reward = 0;
  bool done = false;
  bool fell = false;
  int coins = 0;
};

/// TinkerCoin locomotion task: biped, assist, coins, reward and horizon.
class LocomotionTask {
 public:
  LocomotionTask(BipedParams body, RewardWeights reward, CoinLayout coins, CurriculumSchedule sched, int horizon,
                 std::uint64_t seed);

  /// New episode: upright pose with small random tilt and rates.
  void reset();
  StepOutcome step(const Action& action, double lambda);

  const Biped& biped() const { return biped_; }
  Biped& biped() { return biped_; }
  const CoinField& coins() const { return coins_; }
  CoinField& coins() { return coins_; }
  int t() const { return t_; }
  int horizon() const { return horizon_; }
  double episode_reward() const { return episode_reward_; }
  int episode_coins() const { return episode_coins_; }
  double lambda() const { return lambda_; }
  Vec3 last_assist() const { return last_assist_; }
  const CurriculumSchedule& schedule() const { return sched_; }

 private:
  Biped biped_;
  RewardWeights reward_;
  CoinField coins_;
  CurriculumSchedule sched_;
  int horizon_;
  std::mt19937_64 rng_;
  int t_ = 0;
  double episode_reward_ = 0;
  int episode_coins_ = 0;
  double lambda_ = 0;
  Vec3 last_assist_;
};

}  // namespace edgeplay::sim
