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
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "edgeplay/common/config.hpp"
#include "edgeplay/sim/policy.hpp"
#include "edgeplay/sim/task.hpp"

namespace edgeplay::sim {

struct TrainerConfig {
  std::uint64_t seed = 42;
  int rollout_steps = 1024;
  int epochs = 8;
  int minibatch = 256;
  float learning_rate = 5e-4f;
  float gamma = 0.99f;
  float gae_lambda = 0.95f;
  float clip = 0.2f;
  float initial_log_std = -0.5f;
  float reward_scale = 0.01f;
  int horizon = 1000;
  bool observe_lambda = false;
  /// Milestone: at least milestone_fraction of the last milestone_window
  /// episodes ran the full horizon.
  int milestone_window = 50;
  double milestone_fraction = 0.8;

  static Result<TrainerConfig, BadConfig> from_config(const Config& cfg);
};

struct TaskConfig {
  BipedParams body;
  RewardWeights reward;
  CoinLayout coins;
  CurriculumSchedule schedule;

  static Result<TaskConfig, BadConfig> from_config(const Config& cfg);
};

/// Clipped-ratio policy gradient (PPO) with GAE on the locomotion task. The
/// global step counter drives the assist schedule. Stepping is incremental
/// so the main loop can budget it per tick; with a fixed seed the episode
/// stream is bitwise reproducible.
class PpoTrainer {
 public:
  PpoTrainer(TrainerConfig cfg, TaskConfig task);

  /// Runs up to max_steps environment steps, including any policy update
  /// that falls due. Returns the number of steps taken; fewer than max_steps
  /// only when halted.
  std::int64_t advance(std::int64_t max_steps);

  /// Stop at the next episode boundary. resume() clears the halt.
  void request_halt() { halt_requested_ = true; }
  void resume() { halt_requested_ = halted_ = false; }
  bool halted() const { return halted_; }
  bool halt_requested() const { return halt_requested_; }

  std::int64_t global_step() const { return global_step_; }
  double lambda() const { return lambda_at(global_step_, task_config_.schedule); }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }
  std::optional<std::int64_t> milestone_step() const { return milestone_; }
  int updates() const { return updates_; }

  const LocomotionTask& task() const { return task_; }
  LocomotionTask& task() { return task_; }
  const GaussianPolicy& policy() const { return policy_; }
  const TrainerConfig& config() const { return cfg_; }

  std::function<void(const EpisodeRecord&)> on_episode;
  std::function<void(int coins_now)> on_coin;

 private:
  void env_step();
  void update();
  Observation observe() const;

  TrainerConfig cfg_;
  TaskConfig task_config_;
  LocomotionTask task_;
  std::mt19937_64 rng_;
  GaussianPolicy policy_;
  Mlp value_;
  std::vector<float> log_std_grad_;
  std::normal_distribution<float> n01_{0.f, 1.f};

  // Rollout buffer.
  int fill_ = 0;
  std::vector<float> obs_, act_, logp_, rew_, val_, boot_;
  std::vector<char> term_, trunc_;
  std::vector<std::vector<float>> acts_;

  std::int64_t global_step_ = 0;
  std::vector<EpisodeRecord> episodes_;
  int full_in_window_ = 0;
  std::optional<std::int64_t> milestone_;
  int updates_ = 0;
  bool halt_requested_ = false;
  bool halted_ = false;
};

}  // namespace edgeplay::sim
