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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "edgeplay/common/result.hpp"

namespace edgeplay::protocol {

inline constexpr std::int64_t kProtocolVersion = 1;

/// The unit of all control and telemetry traffic. One UTF-8 JSON object per
/// channel message with exactly the keys v, id, type, source, ts, payload.
///
/// Equality is structural. Two envelopes that differ only in the key order
/// or whitespace of their wire text compare equal after decoding.
struct Envelope {
  std::int64_t v = kProtocolVersion;
  std::string id;
  std::string type;
  std::string source;
  /// Producer-local wall-clock milliseconds. Never used for ordering.
  std::int64_t ts = 0;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

enum class ProtocolErrc {
  InvalidEnvelope,     // encode-side invariant violation
  MalformedMessage,    // not JSON, missing key, wrong field type, bad field value
  UnsupportedVersion,  // v greater than kProtocolVersion
  UnknownType,         // type string absent from the taxonomy
  DuplicateType,       // dispatch / taxonomy registration collision
};

std::string_view to_string(ProtocolErrc code);

struct ProtocolError {
  ProtocolErrc code;
  std::string detail;
  /// Id of the offending envelope when it could be recovered from the input.
  std::string ref_id;
};

/// True when s matches segment("." segment)+ with segments drawn from
/// [a-z0-9_]+.
bool is_valid_type(std::string_view s);

/// Checks every Envelope invariant. Returns the first violation.
std::optional<ProtocolError> validate(const Envelope& env);

Result<std::string, ProtocolError> encode(const Envelope& env);

/// Accepts arbitrary bytes. Unknown extra top-level keys are ignored.
Result<Envelope, ProtocolError> decode(std::string_view text);

/// "env-" + source + "-" + counter + "-" + 8 lowercase hex digits of entropy.
std::string make_id(std::string_view source, std::uint64_t counter, std::uint32_t entropy);

/// Per-endpoint id source. The counter makes ids unique within a session;
/// entropy is derived from the seed so runs are reproducible. Safe to call
/// from multiple threads.
class IdGenerator {
 public:
  explicit IdGenerator(std::string source, std::uint64_t seed = 0);

  std::string next();
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::uint64_t seed_;
  std::atomic<std::uint64_t> counter_{0};
};

/// Builds an envelope stamped with a fresh id and the current wall-clock ts.
Envelope make_envelope(IdGenerator& ids, std::string type, nlohmann::json payload = nlohmann::json::object());

/// protocol.error reply describing err. The payload carries code, detail and
/// the offending envelope id (ref_id) when known.
Envelope make_error_envelope(IdGenerator& ids, const ProtocolError& err);
Envelope make_error_envelope(IdGenerator& ids, std::string_view code, std::string_view detail,
                             std::string_view ref_id = {});

}  // namespace edgeplay::protocol
