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

#include "edgeplay/sim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgeplay::sim {

Result<TrainerConfig, BadConfig> TrainerConfig::from_config(const Config& cfg) {
  TrainerConfig t;
  auto seed = cfg.get_int("trainer.seed", static_cast<long long>(t.seed));
  if (!seed) return unexpected(seed.error());
  t.seed = static_cast<std::uint64_t>(*seed);
  for (auto [key, field] : {std::pair{"trainer.rollout_steps", &t.rollout_steps}, std::pair{"trainer.epochs", &t.epochs},
                            std::pair{"trainer.minibatch", &t.minibatch}, std::pair{"trainer.horizon", &t.horizon},
                            std::pair{"trainer.milestone_window", &t.milestone_window}}) {
    auto v = cfg.get_int(key, *field);
    if (!v) return unexpected(v.error());
    if (*v <= 0) return unexpected(BadConfig{0, key, "must be > 0"});
    *field = static_cast<int>(*v);
  }
  for (auto [key, field] : {std::pair{"trainer.learning_rate", &t.learning_rate}, std::pair{"trainer.gamma", &t.gamma},
                            std::pair{"trainer.gae_lambda", &t.gae_lambda}, std::pair{"trainer.clip", &t.clip},
                            std::pair{"trainer.initial_log_std", &t.initial_log_std},
                            std::pair{"trainer.reward_scale", &t.reward_scale}}) {
    auto v = cfg.get_double(key, *field);
    if (!v) return unexpected(v.error());
    *field = static_cast<float>(*v);
  }
  auto frac = cfg.get_double("trainer.milestone_fraction", t.milestone_fraction);
  if (!frac) return unexpected(frac.error());
  t.milestone_fraction = *frac;
  auto obs = cfg.get_bool("trainer.observe_lambda", t.observe_lambda);
  if (!obs) return unexpected(obs.error());
  t.observe_lambda = *obs;
  return t;
}

Result<TaskConfig, BadConfig> TaskConfig::from_config(const Config& cfg) {
  TaskConfig t;
  auto body = BipedParams::from_config(cfg);
  if (!body) return unexpected(body.error());
  auto reward = RewardWeights::from_config(cfg);
  if (!reward) return unexpected(reward.error());
  auto coins = CoinLayout::from_config(cfg);
  if (!coins) return unexpected(coins.error());
  auto sched = CurriculumSchedule::from_config(cfg);
  if (!sched) return unexpected(sched.error());
  t.body = *body;
  t.reward = *reward;
  t.coins = *coins;
  t.schedule = *sched;
  t.schedule.gravity = t.body.gravity;
  return t;
}

PpoTrainer::PpoTrainer(TrainerConfig cfg, TaskConfig task)
    : cfg_(cfg),
      task_config_(task),
      task_(task.body, task.reward, task.coins, task.schedule, cfg.horizon, cfg.seed),
      rng_(cfg.seed) {
  policy_ = GaussianPolicy::create(rng_, cfg_.initial_log_std);
  value_ = Mlp(kValueLayers, rng_, 1.0f);
  log_std_grad_.assign(kActionDim, 0.f);
  const auto T = static_cast<std::size_t>(cfg_.rollout_steps);
  obs_.resize(T * kObsDim);
  act_.resize(T * kActionDim);
  logp_.resize(T);
  rew_.resize(T);
  val_.resize(T + 1);
  boot_.assign(T, 0.f);
  term_.resize(T);
  trunc_.resize(T);
  task_.reset();
}

Observation PpoTrainer::observe() const {
  return task_.biped().observe(cfg_.observe_lambda ? static_cast<float>(task_.lambda()) : 0.f);
}

std::int64_t PpoTrainer::advance(std::int64_t max_steps) {
  std::int64_t taken = 0;
  while (taken < max_steps && !halted_) {
    env_step();
    ++taken;
  }
  return taken;
}

void PpoTrainer::env_step() {
  const int i = fill_;
  const auto o = observe();
  std::copy(o.begin(), o.end(), obs_.begin() + i * kObsDim);
  policy_.mean.forward(o.data(), acts_);
  float lp = 0;
  Action a{};
  for (std::size_t d = 0; d < kActionDim; ++d) {
    const float sd = std::exp(policy_.log_std[d]);
    const float z = n01_(rng_);
    a[d] = acts_.back()[d] + sd * z;
    act_[i * kActionDim + d] = a[d];
    lp += -0.5f * z * z - policy_.log_std[d] - 0.9189385f;
  }
  logp_[i] = lp;
  value_.forward(o.data(), acts_);
  val_[i] = acts_.back()[0];

  const auto out = task_.step(a, lambda_at(global_step_, task_config_.schedule));
  ++global_step_;
  rew_[i] = static_cast<float>(out.reward * cfg_.reward_scale);
  term_[i] = out.fell;
  trunc_[i] = out.done && !out.fell;
  if (out.coins > 0 && on_coin) on_coin(task_.episode_coins());
  if (trunc_[i]) {
    const auto o2 = observe();
    value_.forward(o2.data(), acts_);
    boot_[i] = acts_.back()[0];
  } else {
    boot_[i] = 0;
  }
  if (out.done) {
    EpisodeRecord rec;
    rec.index = static_cast<std::int64_t>(episodes_.size());
    rec.cumulative_reward = task_.episode_reward();
    rec.length = task_.t();
    rec.coins = task_.episode_coins();
    rec.cause = out.fell ? TerminalCause::Fell : TerminalCause::Horizon;
    rec.end_step = global_step_;
    episodes_.push_back(rec);
    const auto n = episodes_.size();
    const auto w = static_cast<std::size_t>(cfg_.milestone_window);
    full_in_window_ += rec.length >= cfg_.horizon;
    if (n > w) full_in_window_ -= episodes_[n - 1 - w].length >= cfg_.horizon;
    if (!milestone_ && n >= w && full_in_window_ >= cfg_.milestone_fraction * static_cast<double>(w))
      milestone_ = global_step_;
    task_.reset();
    if (on_episode) on_episode(rec);
    if (halt_requested_) halted_ = true;
  }
  if (++fill_ == cfg_.rollout_steps) {
    update();
    fill_ = 0;
  }
}

void PpoTrainer::update() {
  const int T = cfg_.rollout_steps;
  {
    const auto o = observe();
    value_.forward(o.data(), acts_);
    val_[T] = acts_.back()[0];
  }
  std::vector<float> adv(T), ret(T);
  const float gam = cfg_.gamma, lam = cfg_.gae_lambda;
  float last = 0;
  for (int i = T - 1; i >= 0; --i) {
    const float next = term_[i] ? 0 : (trunc_[i] ? boot_[i] : val_[i + 1]);
    const float delta = rew_[i] + gam * next - val_[i];
    const bool cut = term_[i] || trunc_[i];
    last = delta + (cut ? 0 : gam * lam * last);
    adv[i] = last;
    ret[i] = adv[i] + val_[i];
  }
  float mean = 0, sq = 0;
  for (float a : adv) mean += a;
  mean /= T;
  for (float a : adv) sq += (a - mean) * (a - mean);
  const float sd = std::sqrt(sq / T) + 1e-8f;

  std::vector<int> idx(T);
  std::iota(idx.begin(), idx.end(), 0);
  const float lo = 1 - cfg_.clip, hi = 1 + cfg_.clip;
  std::vector<float> z(kActionDim), g(kActionDim);
  for (int e = 0; e < cfg_.epochs; ++e) {
    std::shuffle(idx.begin(), idx.end(), rng_);
    for (int s = 0; s < T; s += cfg_.minibatch) {
      const int end = std::min(T, s + cfg_.minibatch);
      const int mb = end - s;
      for (int k = s; k < end; ++k) {
        const int i = idx[k];
        const float A = (adv[i] - mean) / sd;
        policy_.mean.forward(&obs_[i * kObsDim], acts_);
        float lp = 0;
        for (std::size_t d = 0; d < kActionDim; ++d) {
          z[d] = (act_[i * kActionDim + d] - acts_.back()[d]) / std::exp(policy_.log_std[d]);
          lp += -0.5f * z[d] * z[d] - policy_.log_std[d] - 0.9189385f;
        }
        const float ratio = std::exp(lp - logp_[i]);
        const bool clipped = (A > 0 && ratio > hi) || (A < 0 && ratio < lo);
        if (!clipped) {
          // loss = -ratio * A
          for (std::size_t d = 0; d < kActionDim; ++d) {
            g[d] = -ratio * A * z[d] / std::exp(policy_.log_std[d]);
            log_std_grad_[d] += -ratio * A * (z[d] * z[d] - 1);
          }
          policy_.mean.backward(acts_, g);
        }
        value_.forward(&obs_[i * kObsDim], acts_);
        const float dv = acts_.back()[0] - ret[i];
        value_.backward(acts_, {dv});
      }
      const float scale = 1.0f / static_cast<float>(mb);
      policy_.mean.adam_step(cfg_.learning_rate, scale);
      value_.adam_step(cfg_.learning_rate * 3, scale);
      // Sign-clipped step on log_std.
      for (std::size_t d = 0; d < kActionDim; ++d) {
        const float gm = log_std_grad_[d] / static_cast<float>(mb);
        policy_.log_std[d] -= 3e-4f * 10 * (gm > 0 ? 1 : -1) * std::min(1.0f, std::abs(gm));
        log_std_grad_[d] = 0;
        policy_.log_std[d] = std::clamp(policy_.log_std[d], -2.5f, 0.5f);
      }
    }
  }
  ++updates_;
}

}  // namespace edgeplay::sim
