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

// Offline trainer: runs the TinkerCoin locomotion task headless and writes
// a GWPL checkpoint. Used to build the shipped Playground policies.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>

#include "cli_common.hpp"
#include "edgeplay/common/config.hpp"
#include "edgeplay/sim/policy.hpp"
#include "edgeplay/sim/trainer.hpp"

using namespace edgeplay;

int main(int argc, char** argv) {
  CLI::App app{"Train the locomotion policy offline"};
  std::string config_path, out = "policy.gwpl";
  std::uint64_t seed = 42;
  double compress = 1.0;
  std::int64_t steps = 1'000'000;
  bool until_milestone = false, no_curriculum = false, quiet = false;
  app.add_option("--config", config_path, "Config file (falls back to $GEWU_CONFIG)");
  app.add_option("--seed", seed, "Trainer seed");
  app.add_option("--compress", compress, "Curriculum breakpoint divisor")->check(CLI::PositiveNumber);
  app.add_option("--steps", steps, "Step budget")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Checkpoint path");
  app.add_flag("--until-milestone", until_milestone, "Stop at the full-horizon milestone");
  app.add_flag("--no-curriculum", no_curriculum, "Hold lambda at 0");
  app.add_flag("--quiet", quiet, "Only print the summary");
  CLI11_PARSE(app, argc, argv);

  auto cfg = cli::load_config(config_path);
  if (!cfg) return cli::kBadConfig;
  auto task = sim::TaskConfig::from_config(*cfg);
  auto trainer_cfg = sim::TrainerConfig::from_config(*cfg);
  if (!task || !trainer_cfg) {
    std::fprintf(stderr, "BadConfig: %s\n", (!task ? task.error() : trainer_cfg.error()).message().c_str());
    return cli::kBadConfig;
  }
  if (cli::reject_unread(*cfg, {"playground.", "robohetu.", "tinkercoin.", "telemetry.", "net.", "stream."}))
    return cli::kBadConfig;
  if (app.count("--seed")) trainer_cfg->seed = seed;
  if (app.count("--compress")) task->schedule.compress = compress;
  if (no_curriculum) task->schedule.enabled = false;

  sim::PpoTrainer trainer(*trainer_cfg, *task);
  if (!quiet) {
    trainer.on_episode = [](const sim::EpisodeRecord& r) {
      if (r.index % 20 == 0)
        std::printf("episode %lld step %lld len %d reward %.1f coins %d %s\n", static_cast<long long>(r.index),
                    static_cast<long long>(r.end_step), r.length, r.cumulative_reward, r.coins,
                    std::string(sim::to_string(r.cause)).c_str());
    };
  }
  while (trainer.global_step() < steps) {
    trainer.advance(std::min<std::int64_t>(4096, steps - trainer.global_step()));
    if (until_milestone && trainer.milestone_step()) break;
  }
  auto saved = sim::save_checkpoint(trainer.policy(), out);
  if (!saved) {
    std::fprintf(stderr, "cannot write %s: %s\n", out.c_str(), saved.error().detail.c_str());
    return 1;
  }
  std::printf("steps %lld episodes %zu milestone %lld lambda %.1f -> %s\n", static_cast<long long>(trainer.global_step()),
              trainer.episodes().size(), static_cast<long long>(trainer.milestone_step().value_or(-1)), trainer.lambda(),
              out.c_str());
  return 0;
}
