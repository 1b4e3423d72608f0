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

#include "edgeplay/protocol/envelope.hpp"

#include <chrono>
#include <cstdio>
#include <limits>

#include "edgeplay/common/clock.hpp"

namespace edgeplay::protocol {

using nlohmann::json;

std::string_view to_string(ProtocolErrc code) {
  switch (code) {
    case ProtocolErrc::InvalidEnvelope: return "InvalidEnvelope";
    case ProtocolErrc::MalformedMessage: return "MalformedMessage";
    case ProtocolErrc::UnsupportedVersion: return "UnsupportedVersion";
    case ProtocolErrc::UnknownType: return "UnknownType";
    case ProtocolErrc::DuplicateType: return "DuplicateType";
  }
  return "Unknown";
}

namespace {

bool is_segment_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

ProtocolError err(ProtocolErrc code, std::string detail, std::string ref = {}) {
  return ProtocolError{code, std::move(detail), std::move(ref)};
}

}  // namespace

bool is_valid_type(std::string_view s) {
  std::size_t segments = 0;
  std::size_t seg_len = 0;
  for (char c : s) {
    if (c == '.') {
      if (seg_len == 0) return false;
      ++segments;
      seg_len = 0;
    } else if (is_segment_char(c)) {
      ++seg_len;
    } else {
      return false;
    }
  }
  if (seg_len == 0) return false;
  ++segments;
  return segments >= 2;
}

std::optional<ProtocolError> validate(const Envelope& env) {
  if (env.v < 1) return err(ProtocolErrc::InvalidEnvelope, "v must be >= 1", env.id);
  if (env.id.empty()) return err(ProtocolErrc::InvalidEnvelope, "id is empty");
  if (env.source.empty()) return err(ProtocolErrc::InvalidEnvelope, "source is empty", env.id);
  if (!is_valid_type(env.type)) {
    return err(ProtocolErrc::InvalidEnvelope, "type does not match the type grammar", env.id);
  }
  if (env.ts < 0) return err(ProtocolErrc::InvalidEnvelope, "ts is negative", env.id);
  if (!env.payload.is_object()) return err(ProtocolErrc::InvalidEnvelope, "payload is not an object", env.id);
  return std::nullopt;
}

Result<std::string, ProtocolError> encode(const Envelope& env) {
  if (auto e = validate(env)) return unexpected(std::move(*e));
  json j = json::object();
  j["v"] = env.v;
  j["id"] = env.id;
  j["type"] = env.type;
  j["source"] = env.source;
  j["ts"] = env.ts;
  j["payload"] = env.payload;
  try {
    return j.dump();
  } catch (const json::exception& ex) {
    // Only reachable with invalid UTF-8 inside a string.
    return unexpected(err(ProtocolErrc::InvalidEnvelope, ex.what(), env.id));
  }
}

Result<Envelope, ProtocolError> decode(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return unexpected(err(ProtocolErrc::MalformedMessage, "not valid JSON"));
  if (!j.is_object()) return unexpected(err(ProtocolErrc::MalformedMessage, "top level is not an object"));

  std::string ref;
  if (auto it = j.find("id"); it != j.end() && it->is_string()) ref = it->get<std::string>();

  auto v_it = j.find("v");
  if (v_it == j.end() || !v_it->is_number_integer()) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "v missing or not an integer", ref));
  }
  Envelope env;
  if (v_it->is_number_unsigned() && v_it->get<std::uint64_t>() > std::uint64_t(std::numeric_limits<std::int64_t>::max())) {
    return unexpected(err(ProtocolErrc::UnsupportedVersion, "v out of range", ref));
  }
  env.v = v_it->get<std::int64_t>();
  if (env.v <= 0) return unexpected(err(ProtocolErrc::MalformedMessage, "v must be >= 1", ref));
  if (env.v > kProtocolVersion) {
    return unexpected(err(ProtocolErrc::UnsupportedVersion, "unsupported version " + std::to_string(env.v), ref));
  }

  auto str_field = [&](const char* key, std::string& out) -> bool {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
  };
  if (!str_field("id", env.id) || env.id.empty()) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "id missing or empty", ref));
  }
  if (!str_field("type", env.type) || !is_valid_type(env.type)) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "type missing or malformed", ref));
  }
  if (!str_field("source", env.source) || env.source.empty()) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "source missing or empty", ref));
  }
  auto ts_it = j.find("ts");
  if (ts_it == j.end() || !ts_it->is_number_integer()) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "ts missing or not an integer", ref));
  }
  if (ts_it->is_number_unsigned() && ts_it->get<std::uint64_t>() > std::uint64_t(std::numeric_limits<std::int64_t>::max())) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "ts out of range", ref));
  }
  env.ts = ts_it->get<std::int64_t>();
  if (env.ts < 0) return unexpected(err(ProtocolErrc::MalformedMessage, "ts is negative", ref));
  auto p_it = j.find("payload");
  if (p_it == j.end() || !p_it->is_object()) {
    return unexpected(err(ProtocolErrc::MalformedMessage, "payload missing or not an object", ref));
  }
  env.payload = std::move(*p_it);
  return env;
}

std::string make_id(std::string_view source, std::uint64_t counter, std::uint32_t entropy) {
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", entropy);
  std::string out = "env-";
  out.append(source);
  out += '-';
  out += std::to_string(counter);
  out += '-';
  out.append(hex, 8);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

IdGenerator::IdGenerator(std::string source, std::uint64_t seed)
    : source_(std::move(source)), seed_(seed) {}

std::string IdGenerator::next() {
  std::uint64_t n = counter_.fetch_add(1, std::memory_order_relaxed) + 1;
  auto entropy = static_cast<std::uint32_t>(splitmix64(seed_ ^ (n * 0xD1B54A32D192ED03ULL)) >> 32);
  return make_id(source_, n, entropy);
}

Envelope make_envelope(IdGenerator& ids, std::string type, json payload) {
  Envelope env;
  env.id = ids.next();
  env.type = std::move(type);
  env.source = ids.source();
  env.ts = wall_clock_ms();
  env.payload = std::move(payload);
  return env;
}

Envelope make_error_envelope(IdGenerator& ids, std::string_view code, std::string_view detail,
                             std::string_view ref_id) {
  json p = {{"code", code}, {"detail", detail}};
  if (!ref_id.empty()) p["ref_id"] = ref_id;
  return make_envelope(ids, "protocol.error", std::move(p));
}

Envelope make_error_envelope(IdGenerator& ids, const ProtocolError& e) {
  return make_error_envelope(ids, to_string(e.code), e.detail, e.ref_id);
}

}  // namespace edgeplay::protocol
