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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace edgeplay {

/// Logical lane of a message on any channel. The numeric values are the lane
/// tag bytes of the relayed stream wire format.
enum class Lane : std::uint8_t {
  Control = 0,    // envelopes; reliable and ordered
  Media = 1,      // encoded frames; best effort, newest wins
  Signaling = 2,  // session establishment
};

inline constexpr std::size_t kLaneCount = 3;

inline constexpr std::size_t index_of(Lane lane) { return static_cast<std::size_t>(lane); }

inline std::optional<Lane> lane_from_byte(std::uint8_t b) {
  if (b < kLaneCount) return static_cast<Lane>(b);
  return std::nullopt;
}

inline std::string_view to_string(Lane lane) {
  switch (lane) {
    case Lane::Control: return "control";
    case Lane::Media: return "media";
    case Lane::Signaling: return "signaling";
  }
  return "unknown";
}

}  // namespace edgeplay
