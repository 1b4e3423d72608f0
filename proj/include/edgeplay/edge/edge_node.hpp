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
#include <memory>
#include <optional>
#include <string>

#include "edgeplay/common/clock.hpp"
#include "edgeplay/edge/jsonl.hpp"
#include "edgeplay/scene/director.hpp"
#include "edgeplay/scenes/scenes.hpp"
#include "edgeplay/stream/frame.hpp"
#include "edgeplay/stream/pacer.hpp"
#include "edgeplay/transport/endpoint.hpp"

namespace edgeplay::edge {

struct EdgeOptions {
  std::optional<std::string> default_scene;
  double fps = 30;
  std::uint16_t width = 320;
  std::uint16_t height = 180;
  stream::Encoding encoding = stream::Encoding::RunLength;
  double sim_rate_hz = 60;
  /// Simulation steps allowed per tick when the loop falls behind.
  int max_catchup_steps = 8;
  /// Render and pace frames even without a connected endpoint.
  bool stream_offline = false;
  bool log_frames = false;
};

/// The edge process minus its I/O: scene director, the three scenes, the
/// frame renderer and pacer. Commands arrive from the attached endpoint or
/// from inject(); everything the director emits goes to the endpoint and the
/// log. tick() is the main-loop iteration.
class EdgeNode {
 public:
  EdgeNode(const Clock& clock, std::shared_ptr<const scenes::SceneSettings> settings, scenes::PolicyLibrary policies,
           EdgeOptions opts, std::shared_ptr<JsonlLog> log = nullptr);

  /// Registers the scenes and requests the default scene, if any. Until a
  /// scene.load arrives no scene is active.
  Result<void, std::string> boot();
  void attach(transport::Endpoint* endpoint) { endpoint_ = endpoint; }

  /// A command from the local console or a script.
  scene::RouteOutcome inject(const std::string& type, nlohmann::json payload);
  void tick();

  scene::SceneDirector& director() { return director_; }
  const stream::FramePacer& pacer() const { return pacer_; }

  struct Stats {
    std::uint64_t envelopes_in = 0;
    std::uint64_t envelopes_out = 0;
    std::uint64_t sim_steps = 0;
    std::uint64_t frames_rendered = 0;
    std::uint64_t frames_sent = 0;
    std::uint64_t frame_bytes_sent = 0;
  };
  const Stats& stats() const { return stats_; }
  std::optional<std::uint32_t> last_sent_seq() const { return last_sent_seq_; }

 private:
  void emit(protocol::Envelope env);
  void stream_frames(Millis now);

  const Clock& clock_;
  std::shared_ptr<const scenes::SceneSettings> settings_;
  scenes::PolicyLibrary policies_;
  EdgeOptions opts_;
  std::shared_ptr<JsonlLog> log_;
  protocol::IdGenerator ids_{"edge"};
  protocol::IdGenerator console_ids_{"console"};
  scene::SceneDirector director_;
  transport::Endpoint* endpoint_ = nullptr;
  stream::FramePacer pacer_;
  std::uint32_t next_seq_ = 1;
  std::optional<std::uint32_t> last_sent_seq_;
  std::optional<Millis> last_sim_;
  double sim_accum_ms_ = 0;
  double next_render_at_ = 0;
  Stats stats_;
};

}  // namespace edgeplay::edge
