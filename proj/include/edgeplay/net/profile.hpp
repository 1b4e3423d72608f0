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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/clock.hpp"
#include "edgeplay/common/config.hpp"
#include "edgeplay/common/lane.hpp"
#include "edgeplay/common/result.hpp"

namespace edgeplay::net {

/// Adverse-network description. Loss is per lane; reorder and duplication
/// apply to every lane. Lost control and signaling messages are recovered by
/// the transport's reliability layer, not by the harness.
struct NetProfile {
  std::uint64_t seed = 0;
  Millis base_latency_ms = 0;
  Millis jitter_ms = 0;  // uniform in [-jitter, +jitter]
  std::array<double, kLaneCount> loss_pct{};
  double reorder_pct = 0;
  double duplicate_pct = 0;
  bool direct_path_blocked = false;

  /// Returns a description of the first invalid field.
  std::optional<std::string> validate() const;

  /// "lan", "lossy-wifi" or "hostile".
  static std::optional<NetProfile> preset(std::string_view name);
  static std::vector<std::string_view> preset_names();

  /// Reads net.* keys (net.preset, net.seed, net.latency_ms, net.jitter_ms,
  /// net.loss_pct, net.loss_pct.control|media|signaling, net.reorder_pct,
  /// net.duplicate_pct, net.direct_blocked). net.preset is applied first.
  static Result<NetProfile, BadConfig> from_config(const Config& cfg);
};

struct ScheduledDelivery {
  Millis at = 0;
  bool duplicate = false;
};

/// Fate of one message. Empty deliveries means the message was lost.
struct DeliveryPlan {
  std::vector<ScheduledDelivery> deliveries;
  bool reorder_with_next = false;
};

/// Pure schedule function: the outcome depends only on the profile, the
/// stream, the lane, the per-lane message index and the send time.
DeliveryPlan plan_delivery(const NetProfile& profile, std::uint64_t stream, Lane lane, std::uint64_t index,
                           Millis send_time);

}  // namespace edgeplay::net
