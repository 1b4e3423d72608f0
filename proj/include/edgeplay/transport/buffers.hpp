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

#include <atomic>
#include <cstddef>
#include <deque>
#include <mutex>
#include <thread>
#include <vector>

#include "edgeplay/protocol/envelope.hpp"
#include "edgeplay/protocol/taxonomy.hpp"

namespace edgeplay::transport {

enum class BufferPush { Appended, Superseded, Overflow };

/// Envelopes accepted before the control channel opens. Insertion order is
/// preserved. A Snapshot replaces any buffered Snapshot of the same type (the
/// newer one takes the later position). When full, a StateIntent evicts the
/// oldest buffered Snapshot if there is one; otherwise the new envelope is
/// refused and the existing entries are kept.
class OutboundBuffer {
 public:
  explicit OutboundBuffer(std::size_t capacity = 256) : capacity_(capacity) {}

  BufferPush push(protocol::Envelope env, protocol::CommandClass cls);
  std::vector<protocol::Envelope> take_all();

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  const std::deque<std::pair<protocol::Envelope, protocol::CommandClass>>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<std::pair<protocol::Envelope, protocol::CommandClass>> entries_;
};

struct PollResult {
  std::vector<protocol::Envelope> envelopes;
  std::size_t coalesced = 0;  // superseded snapshots dropped by this poll
};

/// Inbound envelopes in channel-arrival order. Any thread may push; exactly
/// one thread may poll. A second polling thread is a contract violation:
/// debug builds abort, release builds count it.
class InboundQueue {
 public:
  explicit InboundQueue(bool coalesce_snapshots = true) : coalesce_(coalesce_snapshots) {}

  void push(protocol::Envelope env);
  PollResult poll(std::size_t max);

  std::size_t size() const;
  void set_coalescing(bool on) { coalesce_ = on; }
  bool coalescing() const { return coalesce_; }
  std::uint64_t consumer_violations() const { return violations_.load(); }
  std::uint64_t arrivals() const { return arrivals_.load(); }

 private:
  void check_consumer();

  mutable std::mutex mu_;
  std::deque<protocol::Envelope> items_;
  bool coalesce_;
  std::atomic<std::thread::id> consumer_{};
  std::atomic<std::uint64_t> violations_{0};
  std::atomic<std::uint64_t> arrivals_{0};
};

}  // namespace edgeplay::transport
