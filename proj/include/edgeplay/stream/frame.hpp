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
#include "edgeplay/common/result.hpp"

namespace edgeplay::stream {

/// RGB8 image, rows top to bottom, 3 bytes per pixel.
struct Raster {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::uint8_t> rgb;

  Raster() = default;
  Raster(std::uint16_t w, std::uint16_t h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {}
  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
  friend bool operator==(const Raster&, const Raster&) = default;
};

enum class Encoding : std::uint8_t { Raw = 0, RunLength = 1 };

/// GWFR frame header, 25 bytes on the wire, all integers big-endian:
///
///   offset  size  field
///        0     4  magic "GWFR"
///        4     4  seq
///        8     8  ts_ms
///       16     2  width
///       18     2  height
///       20     1  encoding (0 raw RGB8, 1 run-length RGB8)
///       21     4  payload_len
///       25     -  payload
///
/// Raw payload: width * height * 3 bytes. Run-length payload: a sequence of
/// 4-byte runs (count u8 in 1..255, r, g, b) covering the pixels in raster
/// order; runs never span more than 255 pixels.
struct FrameHeader {
  std::uint32_t seq = 0;
  std::uint64_t ts_ms = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  Encoding encoding = Encoding::Raw;
  std::uint32_t payload_len = 0;

  friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

inline constexpr std::size_t kHeaderSize = 25;

struct Frame {
  FrameHeader header;
  Raster raster;
};

enum class FrameErrc { BadMagic, TruncatedFrame, UnknownEncoding, BadDimensions, CorruptPayload };
std::string_view to_string(FrameErrc c);

struct FrameError {
  FrameErrc code;
  std::string detail;
};

/// Requires raster.width, raster.height > 0 and rgb sized to match.
Bytes encode_frame(const Raster& raster, std::uint32_t seq, std::uint64_t ts_ms, Encoding encoding);
Result<Frame, FrameError> decode_frame(ByteView bytes);
/// Header only; no payload checks beyond the length.
Result<FrameHeader, FrameError> peek_header(ByteView bytes);

/// Drops frames whose seq is not above the last one shown.
class FrameReceiver {
 public:
  /// A decoded frame to display, nullopt for a stale one, or a decode error.
  Result<std::optional<Frame>, FrameError> accept(ByteView bytes);
  std::optional<std::uint32_t> last_seq() const { return last_; }
  std::uint64_t stale_dropped() const { return stale_; }
  std::uint64_t shown() const { return shown_; }

 private:
  std::optional<std::uint32_t> last_;
  std::uint64_t stale_ = 0;
  std::uint64_t shown_ = 0;
};

}  // namespace edgeplay::stream
