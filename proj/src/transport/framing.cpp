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

#include "edgeplay/transport/framing.hpp"

namespace edgeplay::transport {

void append_stream_frame(Bytes& out, Lane lane, ByteView payload) {
  put_u32_be(out, static_cast<std::uint32_t>(payload.size() + 1));
  out.push_back(static_cast<std::uint8_t>(lane));
  out.insert(out.end(), payload.begin(), payload.end());
}

Bytes encode_stream_frame(Lane lane, ByteView payload) {
  Bytes out;
  out.reserve(kFrameHeaderSize + payload.size());
  append_stream_frame(out, lane, payload);
  return out;
}

Result<std::vector<Packet>, FramingError> StreamDecoder::feed(ByteView chunk) {
  if (failed_) return unexpected(*failed_);
  buf_.insert(buf_.end(), chunk.begin(), chunk.end());
  std::vector<Packet> out;
  while (buf_.size() - pos_ >= 4) {
    const std::uint32_t length = get_u32_be(buf_.data() + pos_);
    if (length == 0) failed_ = FramingError{FramingErrc::ZeroLength, "zero-length frame"};
    else if (length > max_length_) failed_ = FramingError{FramingErrc::Oversize, std::to_string(length)};
    if (failed_) return unexpected(*failed_);
    if (buf_.size() - pos_ < 4 + std::size_t{length}) break;
    auto lane = lane_from_byte(buf_[pos_ + 4]);
    if (!lane) {
      failed_ = FramingError{FramingErrc::BadLane, std::to_string(buf_[pos_ + 4])};
      return unexpected(*failed_);
    }
    const auto* begin = buf_.data() + pos_ + kFrameHeaderSize;
    out.push_back(Packet{*lane, Bytes(begin, begin + (length - 1))});
    pos_ += 4 + std::size_t{length};
  }
  if (pos_ > 0 && (pos_ == buf_.size() || pos_ > 64 * 1024)) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  return out;
}

}  // namespace edgeplay::transport
