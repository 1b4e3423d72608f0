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

#include "edgeplay/edge/edge_node.hpp"

#include "edgeplay/protocol/envelope.hpp"
#include "edgeplay/stream/render.hpp"

namespace edgeplay::edge {

EdgeNode::EdgeNode(const Clock& clock, std::shared_ptr<const scenes::SceneSettings> settings,
                   scenes::PolicyLibrary policies, EdgeOptions opts, std::shared_ptr<JsonlLog> log)
    : clock_(clock),
      settings_(std::move(settings)),
      policies_(std::move(policies)),
      opts_(std::move(opts)),
      log_(std::move(log)),
      director_(clock_, ids_, [this](protocol::Envelope e) { emit(std::move(e)); }),
      pacer_(opts_.fps) {}

Result<void, std::string> EdgeNode::boot() {
  if (auto r = scenes::register_builtin_scenes(director_, settings_, policies_); !r) return unexpected(r.error().detail);
  if (log_) log_->write({{"t", clock_.now_ms()}, {"event", "boot"}, {"scenes", director_.scenes()}});
  if (opts_.default_scene) {
    auto canonical = director_.resolve(*opts_.default_scene);
    if (!canonical) return unexpected(canonical.error().detail);
    (void)inject("scene.load", {{"scene", *canonical}});
  }
  return {};
}

scene::RouteOutcome EdgeNode::inject(const std::string& type, nlohmann::json payload) {
  auto env = protocol::make_envelope(console_ids_, type, std::move(payload));
  if (log_) log_->write({{"t", clock_.now_ms()}, {"dir", "in"}, {"envelope", envelope_record(env)}});
  ++stats_.envelopes_in;
  return director_.route(env);
}

void EdgeNode::emit(protocol::Envelope env) {
  ++stats_.envelopes_out;
  if (log_) log_->write({{"t", clock_.now_ms()}, {"dir", "out"}, {"envelope", envelope_record(env)}});
  if (endpoint_ && !endpoint_->terminal()) (void)endpoint_->send(std::move(env));
}

void EdgeNode::tick() {
  const Millis now = clock_.now_ms();
  if (endpoint_) {
    endpoint_->tick();
    for (auto& env : endpoint_->poll_inbound(64).envelopes) {
      ++stats_.envelopes_in;
      if (log_) log_->write({{"t", now}, {"dir", "in"}, {"envelope", envelope_record(env)}});
      (void)director_.route(env);
    }
  }
  director_.tick();

  const double h_ms = 1000.0 / opts_.sim_rate_hz;
  if (!last_sim_) last_sim_ = now;
  sim_accum_ms_ += static_cast<double>(now - *last_sim_);
  last_sim_ = now;
  int steps = 0;
  while (sim_accum_ms_ >= h_ms && steps < opts_.max_catchup_steps) {
    sim_accum_ms_ -= h_ms;
    ++steps;
    if (auto* rt = director_.active_runtime()) rt->step(h_ms / 1000.0);
    ++stats_.sim_steps;
  }
  if (sim_accum_ms_ >= h_ms) sim_accum_ms_ = 0;  // fell too far behind: drop the backlog

  stream_frames(now);
}

void EdgeNode::stream_frames(Millis now) {
  const bool online = endpoint_ && endpoint_->connected();
  if (!online && !opts_.stream_offline) return;
  auto* rt = director_.active_runtime();
  if (rt && static_cast<double>(now) >= next_render_at_) {
    next_render_at_ = static_cast<double>(now) + 1000.0 / opts_.fps;
    scene::SceneView view;
    rt->describe(view);
    const auto raster = stream::render(view, director_.camera(), opts_.width, opts_.height);
    pacer_.submit({next_seq_++, now, stream::encode_frame(raster, next_seq_ - 1, static_cast<std::uint64_t>(now),
                                                          opts_.encoding)});
    ++stats_.frames_rendered;
  }
  // Congestion is handled below the pacer: the endpoint keeps one media
  // slot and the newest frame replaces an unsent one.
  auto frame = pacer_.take(now, true);
  if (!frame) return;
  const auto size = frame->bytes.size();
  if (online && !endpoint_->send_media(std::move(frame->bytes))) return;
  ++stats_.frames_sent;
  stats_.frame_bytes_sent += size;
  last_sent_seq_ = frame->seq;
  if (log_ && opts_.log_frames) log_->write({{"t", now}, {"frame", frame->seq}, {"bytes", size}});
}

}  // namespace edgeplay::edge
