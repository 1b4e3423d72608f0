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

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "edgeplay/scene/runtime.hpp"

namespace edgeplay::testing {

/// Scene runtime that records what it receives. Shared state outlives the
/// runtime so tests can inspect it after an unload.
struct RecordingLog {
  std::vector<std::pair<std::string, std::string>> handled;  // (scene, envelope id)
  std::vector<std::string> activations;
  std::vector<std::string> deactivations;
  nlohmann::json last_move;
};

class RecordingRuntime final : public scene::SceneRuntime {
 public:
  RecordingRuntime(std::string name, std::shared_ptr<RecordingLog> log, std::set<std::string> unsupported = {})
      : name_(std::move(name)), log_(std::move(log)), unsupported_(std::move(unsupported)) {}

  scene::HandleOutcome handle(const protocol::Envelope& env) override {
    if (unsupported_.count(env.type)) return scene::HandleOutcome::unsupported(env.type + " unsupported in " + name_);
    log_->handled.emplace_back(name_, env.id);
    if (env.type == "control.move") log_->last_move = env.payload;
    return scene::HandleOutcome::handled();
  }
  void on_activate(scene::Camera& cam) override {
    cam.center_x = static_cast<double>(name_.size());
    log_->activations.push_back(name_);
  }
  void on_deactivate() override { log_->deactivations.push_back(name_); }

 private:
  std::string name_;
  std::shared_ptr<RecordingLog> log_;
  std::set<std::string> unsupported_;
};

inline scene::RuntimeFactory recording_factory(std::string name, std::shared_ptr<RecordingLog> log,
                                               std::set<std::string> unsupported = {}) {
  return [=](const scene::SceneContext&) { return std::make_unique<RecordingRuntime>(name, log, unsupported); };
}

}  // namespace edgeplay::testing
