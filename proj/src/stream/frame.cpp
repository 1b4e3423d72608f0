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

#include "edgeplay/stream/frame.hpp"

#include <cstring>

#include "edgeplay/kernels/kernels.hpp"

namespace edgeplay::stream {

std::string_view to_string(FrameErrc c) {
  switch (c) {
    case FrameErrc::BadMagic: return "BadMagic";
    case FrameErrc::TruncatedFrame: return "TruncatedFrame";
    case FrameErrc::UnknownEncoding: return "UnknownEncoding";
    case FrameErrc::BadDimensions: return "BadDimensions";
    case FrameErrc::CorruptPayload: return "CorruptPayload";
  }
  return "?";
}

Bytes encode_frame(const Raster& raster, std::uint32_t seq, std::uint64_t ts_ms, Encoding encoding) {
  Bytes out{'G', 'W', 'F', 'R'};
  out.reserve(kHeaderSize + raster.rgb.size());
  put_u32_be(out, seq);
  put_u64_be(out, ts_ms);
  put_u16_be(out, raster.width);
  put_u16_be(out, raster.height);
  out.push_back(static_cast<std::uint8_t>(encoding));
  const std::size_t len_at = out.size();
  put_u32_be(out, 0);
  if (encoding == Encoding::Raw) {
    out.insert(out.end(), raster.rgb.begin(), raster.rgb.end());
  } else {
    const auto& k = kernels::active();
    const std::size_t n = raster.pixels();
    const std::uint8_t* px = raster.rgb.data();
    for (std::size_t i = 0; i < n;) {
      const std::size_t run = k.run_length(px, n, i, 255);
      out.push_back(static_cast<std::uint8_t>(run));
      out.insert(out.end(), px + 3 * i, px + 3 * i + 3);
      i += run;
    }
  }
  const auto len = static_cast<std::uint32_t>(out.size() - kHeaderSize);
  out[len_at] = static_cast<std::uint8_t>(len >> 24);
  out[len_at + 1] = static_cast<std::uint8_t>(len >> 16);
  out[len_at + 2] = static_cast<std::uint8_t>(len >> 8);
  out[len_at + 3] = static_cast<std::uint8_t>(len);
  return out;
}

Result<FrameHeader, FrameError> peek_header(ByteView bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "GWFR", 4) != 0)
    return unexpected(FrameError{FrameErrc::BadMagic, "magic is not GWFR"});
  if (bytes.size() < kHeaderSize)
    return unexpected(FrameError{FrameErrc::TruncatedFrame, "header needs 25 bytes, got " + std::to_string(bytes.size())});
  FrameHeader h;
  const std::uint8_t* p = bytes.data();
  h.seq = get_u32_be(p + 4);
  h.ts_ms = get_u64_be(p + 8);
  h.width = get_u16_be(p + 16);
  h.height = get_u16_be(p + 18);
  if (p[20] > 1) return unexpected(FrameError{FrameErrc::UnknownEncoding, "encoding " + std::to_string(p[20])});
  h.encoding = static_cast<Encoding>(p[20]);
  h.payload_len = get_u32_be(p + 21);
  if (h.width == 0 || h.height == 0) return unexpected(FrameError{FrameErrc::BadDimensions, "zero width or height"});
  if (bytes.size() - kHeaderSize < h.payload_len)
    return unexpected(FrameError{FrameErrc::TruncatedFrame, "payload shorter than payload_len"});
  if (bytes.size() - kHeaderSize > h.payload_len)
    return unexpected(FrameError{FrameErrc::CorruptPayload, "bytes after the payload"});
  return h;
}

Result<Frame, FrameError> decode_frame(ByteView bytes) {
  auto h = peek_header(bytes);
  if (!h) return unexpected(h.error());
  Frame f;
  f.header = *h;
  f.raster = Raster(h->width, h->height);
  const std::uint8_t* payload = bytes.data() + kHeaderSize;
  const std::size_t n = f.raster.pixels();
  if (h->encoding == Encoding::Raw) {
    if (h->payload_len != n * 3) return unexpected(FrameError{FrameErrc::CorruptPayload, "raw payload size mismatch"});
    std::memcpy(f.raster.rgb.data(), payload, n * 3);
    return f;
  }
  if (h->payload_len % 4 != 0) return unexpected(FrameError{FrameErrc::CorruptPayload, "run-length payload not in 4-byte runs"});
  std::size_t at = 0;
  const auto& k = kernels::active();
  for (std::size_t off = 0; off < h->payload_len; off += 4) {
    const std::size_t count = payload[off];
    if (count == 0 || at + count > n) return unexpected(FrameError{FrameErrc::CorruptPayload, "bad run length"});
    // Runs fill along rows; a run may wrap to the next row.
    std::size_t left = count;
    while (left > 0) {
      const std::size_t x = at % h->width, row = at / h->width;
      const std::size_t span = std::min(left, static_cast<std::size_t>(h->width) - x);
      k.fill_span(f.raster.rgb.data() + row * h->width * 3, x, x + span, payload[off + 1], payload[off + 2],
                  payload[off + 3]);
      at += span;
      left -= span;
    }
  }
  if (at != n) return unexpected(FrameError{FrameErrc::CorruptPayload, "runs do not cover the raster"});
  return f;
}

Result<std::optional<Frame>, FrameError> FrameReceiver::accept(ByteView bytes) {
  auto h = peek_header(bytes);
  if (!h) return unexpected(h.error());
  if (last_ && h->seq <= *last_) {
    ++stale_;
    return std::optional<Frame>{};
  }
  auto f = decode_frame(bytes);
  if (!f) return unexpected(f.error());
  last_ = h->seq;
  ++shown_;
  return std::optional<Frame>{std::move(*f)};
}

}  // namespace edgeplay::stream
