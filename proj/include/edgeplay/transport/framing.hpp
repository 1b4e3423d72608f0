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
#include <optional>
#include <string>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/lane.hpp"
#include "edgeplay/common/result.hpp"

namespace edgeplay::transport {

/// One message of the relayed stream.
struct Packet {
  Lane lane = Lane::Control;
  Bytes data;

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// Relayed stream wire format, one frame per message:
///
///     offset  size  field
///     0       4     length, u32 big-endian: number of bytes that follow
///                   (lane tag + payload)
///     4       1     lane tag: 0 control, 1 media, 2 signaling
///     5       n     payload, n = length - 1
///
/// A length of 0 or a lane tag above 2 is a framing error.
inline constexpr std::size_t kFrameHeaderSize = 5;
inline constexpr std::uint32_t kMaxFrameLength = 16u * 1024u * 1024u;

Bytes encode_stream_frame(Lane lane, ByteView payload);
void append_stream_frame(Bytes& out, Lane lane, ByteView payload);

enum class FramingErrc { ZeroLength, BadLane, Oversize };

struct FramingError {
  FramingErrc code;
  std::string detail;
};

/// Incremental decoder for a byte stream split at arbitrary points. After an
/// error the decoder stays failed; the connection should be dropped.
class StreamDecoder {
 public:
  explicit StreamDecoder(std::uint32_t max_length = kMaxFrameLength) : max_length_(max_length) {}

  Result<std::vector<Packet>, FramingError> feed(ByteView chunk);
  std::size_t buffered() const { return buf_.size() - pos_; }
  bool failed() const { return failed_.has_value(); }

 private:
  std::uint32_t max_length_;
  Bytes buf_;
  std::size_t pos_ = 0;
  std::optional<FramingError> failed_;
};

}  // namespace edgeplay::transport
