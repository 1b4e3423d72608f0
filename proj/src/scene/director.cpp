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

#include "edgeplay/scene/director.hpp"

#include <algorithm>
#include <cctype>

#include "edgeplay/protocol/taxonomy.hpp"

namespace edgeplay::scene {

using protocol::Envelope;
namespace types = protocol::types;

std::string_view to_string(SceneStatus s) {
  switch (s) {
    case SceneStatus::Unloaded: return "Unloaded";
    case SceneStatus::Loading: return "Loading";
    case SceneStatus::Active: return "Active";
    case SceneStatus::Unloading: return "Unloading";
  }
  return "Unknown";
}

std::string_view to_string(SceneErrc c) {
  switch (c) {
    case SceneErrc::DuplicateScene: return "DuplicateScene";
    case SceneErrc::AliasCollision: return "AliasCollision";
    case SceneErrc::UnknownScene: return "UnknownScene";
    case SceneErrc::NoActiveScene: return "NoActiveScene";
    case SceneErrc::BadPayload: return "BadPayload";
  }
  return "Unknown";
}

std::string SceneDirector::fold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

SceneDirector::SceneDirector(const Clock& clock, protocol::IdGenerator& ids, Emit emit, Options opts)
    : clock_(clock), ids_(ids), emit_(std::move(emit)), opts_(opts) {
  (void)table_.add(std::string(types::kSceneLoad), [this](const Envelope& env) {
    auto r = request_load(env);
    if (!r) {
      emit_error(to_string(r.error().code), r.error().detail, env.id);
      last_director_outcome_ = RouteOutcome::Error;
    } else {
      last_director_outcome_ = *r == LoadOutcome::Accepted ? RouteOutcome::Consumed : RouteOutcome::DuplicateIgnored;
    }
  });
  table_.set_fallback([this](const Envelope& env) { last_director_outcome_ = route_to_scene(env); });
}

Result<void, SceneError> SceneDirector::register_scene(std::string canonical, std::set<std::string> aliases,
                                                       RuntimeFactory factory) {
  const std::string key = fold(canonical);
  if (scenes_.count(canonical)) return unexpected(SceneError{SceneErrc::DuplicateScene, canonical});
  if (auto it = index_.find(key); it != index_.end()) {
    return unexpected(SceneError{it->second == canonical ? SceneErrc::DuplicateScene : SceneErrc::AliasCollision, canonical});
  }
  std::set<std::string> folded;
  for (const auto& a : aliases) {
    auto f = fold(a);
    if (f == key) continue;
    if (index_.count(f)) return unexpected(SceneError{SceneErrc::AliasCollision, a});
    folded.insert(f);
  }
  index_[key] = canonical;
  for (const auto& f : folded) index_[f] = canonical;
  SceneDescriptor d;
  d.canonical_name = canonical;
  d.aliases = std::move(aliases);
  d.factory = std::move(factory);
  scenes_.emplace(canonical, std::move(d));
  return {};
}

Result<std::string, SceneError> SceneDirector::resolve(std::string_view name) const {
  auto it = index_.find(fold(name));
  if (it == index_.end()) return unexpected(SceneError{SceneErrc::UnknownScene, std::string(name)});
  return it->second;
}

void SceneDirector::remember_load_id(const std::string& id) {
  if (!seen_load_ids_.insert(id).second) return;
  seen_order_.push_back(id);
  while (seen_order_.size() > opts_.remembered_load_ids) {
    seen_load_ids_.erase(seen_order_.front());
    seen_order_.pop_front();
  }
}

Result<LoadOutcome, SceneError> SceneDirector::request_load(const Envelope& env) {
  if (seen_load_ids_.count(env.id)) {
    ++stats_.duplicates_ignored;
    return LoadOutcome::DuplicateIgnored;
  }
  auto scene_it = env.payload.find("scene");
  if (scene_it == env.payload.end() || !scene_it->is_string()) {
    return unexpected(SceneError{SceneErrc::BadPayload, "scene.load needs a string 'scene'"});
  }
  auto target = resolve(scene_it->get<std::string>());
  if (!target) return unexpected(target.error());
  remember_load_id(env.id);

  if (loading_ == *target || (active_ == *target && !loading_)) {
    ++stats_.duplicates_ignored;
    return LoadOutcome::DuplicateIgnored;
  }
  ++stats_.loads_accepted;

  std::deque<Envelope> carried;
  if (loading_) {
    auto& prev = scenes_.at(*loading_);
    carried = std::move(prev.deferred);
    prev.deferred.clear();
    set_status(prev, SceneStatus::Unloaded);
    loading_.reset();
  }
  if (active_ == *target) {
    // The wanted scene is already up: cancelling the in-flight load is all
    // that is needed. Commands held for the cancelled load go to it now.
    for (auto& cmd : carried) {
      ++stats_.replayed;
      route_to_scene(cmd);
    }
    return LoadOutcome::Accepted;
  }
  auto& d = scenes_.at(*target);
  d.deferred = std::move(carried);
  loading_ = *target;
  load_done_at_ = clock_.now_ms() + opts_.load_delay_ms;
  set_status(d, SceneStatus::Loading);
  return LoadOutcome::Accepted;
}

RouteOutcome SceneDirector::route(const Envelope& env) {
  last_director_outcome_ = RouteOutcome::Error;
  if (table_.dispatch(env) == protocol::DispatchOutcome::HandlerFailed) {
    emit_error("HandlerFailed", "handler for " + env.type + " failed", env.id);
    return RouteOutcome::Error;
  }
  return last_director_outcome_;
}

RouteOutcome SceneDirector::route_to_scene(const Envelope& env) {
  if (loading_) {
    auto& q = scenes_.at(*loading_).deferred;
    if (q.size() >= opts_.deferred_cap) {
      auto victim = std::find_if(q.begin(), q.end(), [](const Envelope& e) {
        return protocol::routing_class(e.type) == protocol::CommandClass::Snapshot;
      });
      q.erase(victim != q.end() ? victim : q.begin());
      ++stats_.deferred_dropped;
    }
    q.push_back(env);
    ++stats_.deferred_total;
    return RouteOutcome::Deferred;
  }
  if (!active_) {
    emit_error(to_string(SceneErrc::NoActiveScene), "no scene is active", env.id);
    return RouteOutcome::Error;
  }
  auto outcome = scenes_.at(*active_).runtime->handle(env);
  if (outcome.result != HandleResult::Handled) {
    emit_error(outcome.code.empty() ? "Unsupported" : outcome.code, outcome.detail.empty() ? env.type + " is not supported by " + *active_ : outcome.detail,
               env.id);
    return RouteOutcome::Error;
  }
  return RouteOutcome::Handled;
}

void SceneDirector::tick() {
  if (loading_ && clock_.now_ms() >= load_done_at_) complete_load();
}

void SceneDirector::complete_load() {
  const std::string target = *loading_;
  if (active_) {
    auto& old = scenes_.at(*active_);
    set_status(old, SceneStatus::Unloading);
    if (old.runtime) old.runtime->on_deactivate();
    old.runtime.reset();
    set_status(old, SceneStatus::Unloaded);
  }
  auto& d = scenes_.at(target);
  SceneContext ctx;
  ctx.emit = [this](std::string type, nlohmann::json payload) {
    emit_(protocol::make_envelope(ids_, std::move(type), std::move(payload)));
  };
  ctx.clock = &clock_;
  d.runtime = d.factory(ctx);
  loading_.reset();
  active_ = target;
  camera_ = Camera{};
  camera_.scene = target;
  d.runtime->on_activate(camera_);
  ++d.activations;
  ++stats_.activations;
  auto deferred = std::move(d.deferred);
  d.deferred.clear();
  set_status(d, SceneStatus::Active);
  for (auto& cmd : deferred) {
    ++stats_.replayed;
    route_to_scene(cmd);
  }
}

void SceneDirector::set_status(SceneDescriptor& d, SceneStatus s) {
  d.status = s;
  emit_(protocol::make_envelope(ids_, std::string(types::kSceneStatus),
                                {{"scene", d.canonical_name}, {"status", to_string(s)}}));
}

void SceneDirector::emit_error(std::string_view code, std::string detail, const std::string& ref_id) {
  ++stats_.errors;
  emit_(protocol::make_error_envelope(ids_, code, detail, ref_id));
}

std::optional<std::string> SceneDirector::active() const { return active_; }
std::optional<std::string> SceneDirector::loading() const { return loading_; }

SceneRuntime* SceneDirector::active_runtime() {
  if (!active_) return nullptr;
  return scenes_.at(*active_).runtime.get();
}

SceneStatus SceneDirector::status(const std::string& canonical) const {
  auto it = scenes_.find(canonical);
  return it == scenes_.end() ? SceneStatus::Unloaded : it->second.status;
}

const SceneDescriptor* SceneDirector::descriptor(const std::string& canonical) const {
  auto it = scenes_.find(canonical);
  return it == scenes_.end() ? nullptr : &it->second;
}

std::vector<std::string> SceneDirector::scenes() const {
  std::vector<std::string> out;
  for (auto& [name, _] : scenes_) out.push_back(name);
  return out;
}

}  // namespace edgeplay::scene
