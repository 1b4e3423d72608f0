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
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/protocol/dispatch.hpp"
#include "edgeplay/protocol/envelope.hpp"
#include "edgeplay/scene/runtime.hpp"

namespace edgeplay::scene {

enum class SceneStatus { Unloaded, Loading, Active, Unloading };
std::string_view to_string(SceneStatus s);

enum class SceneErrc { DuplicateScene, AliasCollision, UnknownScene, NoActiveScene, BadPayload };
std::string_view to_string(SceneErrc c);

struct SceneError {
  SceneErrc code;
  std::string detail;
};

struct SceneDescriptor {
  std::string canonical_name;
  std::set<std::string> aliases;
  SceneStatus status = SceneStatus::Unloaded;
  /// Present iff status == Active.
  std::unique_ptr<SceneRuntime> runtime;
  /// Commands received while this scene is Loading.
  std::deque<protocol::Envelope> deferred;
  RuntimeFactory factory;
  std::uint64_t activations = 0;
};

enum class LoadOutcome { Accepted, DuplicateIgnored };

enum class RouteOutcome {
  Handled,           // reached the active scene
  Deferred,          // queued for the scene being loaded
  Consumed,          // director-scoped and acted upon
  DuplicateIgnored,  // director-scoped, already satisfied
  Error,             // an error envelope was emitted
};

/// Scene registry, load state machine and command router. Single-threaded:
/// everything runs on the main loop.
///
/// Lifecycle of a load: the target goes Loading; the current scene stays
/// Active until the load delay elapses, then in one step the old scene is
/// unloaded, the target's runtime is built, the camera hook runs, deferred
/// commands are replayed in arrival order, and the target becomes Active.
/// A load request for a different scene while one is Loading retargets the
/// load; the deferred commands carry over to the new target.
class SceneDirector {
 public:
  struct Options {
    Millis load_delay_ms = 300;
    std::size_t deferred_cap = 1024;
    std::size_t remembered_load_ids = 4096;
  };
  using Emit = std::function<void(protocol::Envelope)>;

  SceneDirector(const Clock& clock, protocol::IdGenerator& ids, Emit emit) : SceneDirector(clock, ids, emit, Options{}) {}
  SceneDirector(const Clock& clock, protocol::IdGenerator& ids, Emit emit, Options opts);

  Result<void, SceneError> register_scene(std::string canonical, std::set<std::string> aliases, RuntimeFactory factory);
  Result<std::string, SceneError> resolve(std::string_view name_or_alias) const;

  Result<LoadOutcome, SceneError> request_load(const protocol::Envelope& env);
  /// Single entry point for every command, from the network or the console.
  RouteOutcome route(const protocol::Envelope& env);
  /// Completes a due load. Call once per main-loop iteration.
  void tick();

  /// Active scene name, if any.
  std::optional<std::string> active() const;
  std::optional<std::string> loading() const;
  SceneRuntime* active_runtime();
  SceneStatus status(const std::string& canonical) const;
  const SceneDescriptor* descriptor(const std::string& canonical) const;
  std::vector<std::string> scenes() const;
  const Camera& camera() const { return camera_; }

  /// Handlers for extra director-level types; unknown types go to the scene.
  protocol::DispatchTable& dispatch_table() { return table_; }

  struct Stats {
    std::uint64_t loads_accepted = 0;
    std::uint64_t duplicates_ignored = 0;
    std::uint64_t activations = 0;
    std::uint64_t deferred_total = 0;
    std::uint64_t deferred_dropped = 0;
    std::uint64_t replayed = 0;
    std::uint64_t errors = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  RouteOutcome route_to_scene(const protocol::Envelope& env);
  void complete_load();
  void set_status(SceneDescriptor& d, SceneStatus s);
  void emit_error(std::string_view code, std::string detail, const std::string& ref_id);
  void remember_load_id(const std::string& id);
  static std::string fold(std::string_view s);

  const Clock& clock_;
  protocol::IdGenerator& ids_;
  Emit emit_;
  Options opts_;
  std::map<std::string, SceneDescriptor> scenes_;
  std::map<std::string, std::string> index_;  // folded name or alias -> canonical
  std::optional<std::string> active_;
  std::optional<std::string> loading_;
  Millis load_done_at_ = 0;
  std::set<std::string> seen_load_ids_;
  std::deque<std::string> seen_order_;
  Camera camera_;
  protocol::DispatchTable table_;
  RouteOutcome last_director_outcome_ = RouteOutcome::Consumed;
  Stats stats_;
};

}  // namespace edgeplay::scene
