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

#include "edgeplay/net/harness.hpp"

#include <algorithm>

namespace edgeplay::net {

Harness::Harness(Millis start) : clock_(start) {}

Harness::EventId Harness::schedule_at(Millis t, Action action) {
  t = std::max(t, now());
  Key key{t, next_order_++};
  EventId id = next_id_++;
  queue_.emplace(key, std::make_pair(id, std::move(action)));
  index_.emplace(id, key);
  return id;
}

bool Harness::reschedule(EventId id, Millis t) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  auto node = queue_.extract(it->second);
  Key key{std::max(t, now()), next_order_++};
  node.key() = key;
  queue_.insert(std::move(node));
  it->second = key;
  return true;
}

std::optional<Millis> Harness::time_of(EventId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second.first;
}

bool Harness::cancel(EventId id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  queue_.erase(it->second);
  index_.erase(it);
  return true;
}

Result<std::size_t, ClockRegression> Harness::advance(Millis until_ms) {
  if (until_ms < now()) return unexpected(ClockRegression{now(), until_ms});
  std::size_t fired = 0;
  while (!queue_.empty() && queue_.begin()->first.first <= until_ms) {
    auto node = queue_.extract(queue_.begin());
    index_.erase(node.mapped().first);
    clock_.set(std::max(now(), node.key().first));
    node.mapped().second();
    ++fired;
  }
  clock_.set(until_ms);
  return fired;
}

std::size_t Harness::run(Millis until_ms, Millis step_ms, const std::function<void()>& on_step) {
  std::size_t fired = 0;
  step_ms = std::max<Millis>(1, step_ms);
  while (now() < until_ms) {
    auto r = advance(std::min(until_ms, now() + step_ms));
    fired += *r;
    if (on_step) on_step();
  }
  return fired;
}

HarnessChannel::HarnessChannel(Harness& harness, NetProfile profile, std::uint64_t stream, Receiver receiver)
    : harness_(harness), profile_(profile), stream_(stream), receiver_(std::move(receiver)) {
  blocked_ = false;
}

bool HarnessChannel::writable() const { return harness_.now() >= stalled_until_; }

void HarnessChannel::stall_until(Millis t) {
  stalled_until_ = t;
  harness_.schedule_at(t, [this] { release_stalled(); });
}

void HarnessChannel::release_stalled() {
  if (!writable()) return;
  auto pending = std::move(stalled_);
  stalled_.clear();
  for (auto& [lane, bytes] : pending) enter_network(lane, std::move(bytes), harness_.now());
}

void HarnessChannel::send(Lane lane, ByteView bytes) {
  const auto li = index_of(lane);
  ++stats_.sent[li];
  if (blocked_) {
    ++stats_.dropped[li];
    return;
  }
  if (!writable()) {
    stalled_.emplace_back(lane, Bytes(bytes.begin(), bytes.end()));
    return;
  }
  enter_network(lane, Bytes(bytes.begin(), bytes.end()), harness_.now());
}

void HarnessChannel::enter_network(Lane lane, Bytes bytes, Millis send_time) {
  const auto li = index_of(lane);
  auto plan = plan_delivery(profile_, stream_, lane, index_[li]++, send_time);
  if (plan.deliveries.empty()) {
    ++stats_.dropped[li];
    return;
  }
  std::optional<Harness::EventId> primary;
  for (const auto& d : plan.deliveries) {
    if (d.duplicate) ++stats_.duplicated[li];
    auto id = harness_.schedule_at(d.at, [this, lane, li, payload = bytes] {
      ++stats_.delivered[li];
      receiver_(lane, payload);
    });
    if (!d.duplicate) primary = id;
  }
  // Swap delivery times with a message held back for reordering, if it has
  // not fired yet.
  if (held_[li]) {
    if (auto held_time = harness_.time_of(*held_[li])) {
      auto mine = *harness_.time_of(*primary);
      harness_.reschedule(*primary, *held_time);
      harness_.reschedule(*held_[li], mine);
    }
    held_[li].reset();
  }
  if (plan.reorder_with_next) held_[li] = primary;
}

}  // namespace edgeplay::net
