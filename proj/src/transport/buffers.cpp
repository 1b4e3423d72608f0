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

#include "edgeplay/transport/buffers.hpp"

#include <cassert>
#include <set>
#include <string>

namespace edgeplay::transport {

using protocol::CommandClass;
using protocol::Envelope;

BufferPush OutboundBuffer::push(Envelope env, CommandClass cls) {
  if (cls == CommandClass::Snapshot) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->second == CommandClass::Snapshot && it->first.type == env.type) {
        entries_.erase(it);
        entries_.emplace_back(std::move(env), cls);
        return BufferPush::Superseded;
      }
    }
  }
  if (entries_.size() >= capacity_) {
    if (cls == CommandClass::Snapshot) return BufferPush::Overflow;
    auto victim = entries_.begin();
    while (victim != entries_.end() && victim->second != CommandClass::Snapshot) ++victim;
    if (victim == entries_.end()) return BufferPush::Overflow;
    entries_.erase(victim);
  }
  entries_.emplace_back(std::move(env), cls);
  return BufferPush::Appended;
}

std::vector<Envelope> OutboundBuffer::take_all() {
  std::vector<Envelope> out;
  out.reserve(entries_.size());
  for (auto& [env, _] : entries_) out.push_back(std::move(env));
  entries_.clear();
  return out;
}

void InboundQueue::push(Envelope env) {
  std::lock_guard lock(mu_);
  items_.push_back(std::move(env));
  arrivals_.fetch_add(1, std::memory_order_relaxed);
}

std::size_t InboundQueue::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

void InboundQueue::check_consumer() {
  const auto self = std::this_thread::get_id();
  std::thread::id expected{};
  if (consumer_.compare_exchange_strong(expected, self)) return;
  if (expected != self) {
    violations_.fetch_add(1);
#ifndef NDEBUG
    assert(false && "InboundQueue::poll called from a second consumer thread");
#endif
  }
}

PollResult InboundQueue::poll(std::size_t max) {
  check_consumer();
  PollResult result;
  std::lock_guard lock(mu_);
  if (coalesce_) {
    // Walk newest to oldest; keep the first Snapshot seen per type.
    std::set<std::string, std::less<>> seen;
    std::deque<Envelope> kept;
    for (auto it = items_.rbegin(); it != items_.rend(); ++it) {
      if (protocol::routing_class(it->type) == CommandClass::Snapshot) {
        if (!seen.insert(it->type).second) {
          ++result.coalesced;
          continue;
        }
      }
      kept.push_front(std::move(*it));
    }
    items_ = std::move(kept);
  }
  while (!items_.empty() && result.envelopes.size() < max) {
    result.envelopes.push_back(std::move(items_.front()));
    items_.pop_front();
  }
  return result;
}

}  // namespace edgeplay::transport
