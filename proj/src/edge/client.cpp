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

#include "edgeplay/edge/client.hpp"

namespace edgeplay::edge {
namespace {

transport::EndpointOptions endpoint_options(const ClientOptions& o) {
  transport::EndpointOptions eo;
  eo.role = transport::Role::Initiator;
  eo.session_id = o.session;
  eo.source = "web";
  eo.seed = o.seed;
  eo.deadline_ms = o.deadline_ms;
  eo.establish_timeout_ms = o.establish_timeout_ms;
  return eo;
}

}  // namespace

HeadlessClient::HeadlessClient(const Clock& clock, transport::Link& relay_link, ClientOptions opts,
                               std::shared_ptr<JsonlLog> telemetry_log, std::shared_ptr<JsonlLog> frame_log)
    : clock_(clock),
      endpoint_(endpoint_options(opts), clock, relay_link),
      telemetry_log_(std::move(telemetry_log)),
      frame_log_(std::move(frame_log)) {}

void HeadlessClient::tick() {
  endpoint_.tick();
  const Millis now = clock_.now_ms();
  for (auto& env : endpoint_.poll_inbound(256).envelopes) {
    if (telemetry_log_) telemetry_log_->write({{"t", now}, {"envelope", envelope_record(env)}});
    received_.push_back(std::move(env));
  }
  for (auto& bytes : endpoint_.poll_media()) {
    auto r = receiver_.accept(bytes);
    if (!r) {
      ++frame_errors_;
      if (frame_log_) frame_log_->write({{"t", now}, {"error", std::string(stream::to_string(r.error().code))}});
      continue;
    }
    if (!*r) continue;
    const auto& h = (*r)->header;
    frame_seqs_.push_back(h.seq);
    if (frame_log_)
      frame_log_->write({{"t", now}, {"seq", h.seq}, {"ts_ms", h.ts_ms}, {"width", h.width}, {"height", h.height},
                         {"encoding", static_cast<int>(h.encoding)}, {"bytes", bytes.size()}});
  }
}

bool HeadlessClient::send(const ScriptStep& step) {
  auto env = endpoint_.make(step.type, step.payload);
  if (telemetry_log_) telemetry_log_->write({{"t", clock_.now_ms()}, {"sent", envelope_record(env)}});
  return endpoint_.send(std::move(env)).has_value();
}

std::set<std::string> HeadlessClient::types_seen() const {
  std::set<std::string> s;
  for (auto& e : received_) s.insert(e.type);
  return s;
}

}  // namespace edgeplay::edge
