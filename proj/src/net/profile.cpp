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

#include "edgeplay/net/profile.hpp"

#include <algorithm>
#include <cmath>

namespace edgeplay::net {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream of uniforms in [0, 1).
class Draws {
 public:
  explicit Draws(std::uint64_t key) : state_(key) {}
  double next() {
    state_ = mix(state_);
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

bool pct_ok(double p) { return p >= 0.0 && p <= 100.0; }

}  // namespace

std::optional<std::string> NetProfile::validate() const {
  if (base_latency_ms < 0) return "base_latency_ms must be >= 0";
  if (jitter_ms < 0) return "jitter_ms must be >= 0";
  for (std::size_t i = 0; i < kLaneCount; ++i) {
    if (!pct_ok(loss_pct[i])) return "loss_pct must be within [0, 100]";
  }
  if (!pct_ok(reorder_pct)) return "reorder_pct must be within [0, 100]";
  if (!pct_ok(duplicate_pct)) return "duplicate_pct must be within [0, 100]";
  return std::nullopt;
}

std::vector<std::string_view> NetProfile::preset_names() { return {"lan", "lossy-wifi", "hostile"}; }

std::optional<NetProfile> NetProfile::preset(std::string_view name) {
  NetProfile p;
  if (name == "lan") {
    p.base_latency_ms = 1;
    return p;
  }
  if (name == "lossy-wifi") {
    p.base_latency_ms = 20;
    p.jitter_ms = 10;
    p.loss_pct.fill(5.0);
    return p;
  }
  if (name == "hostile") {
    p.base_latency_ms = 40;
    p.jitter_ms = 20;
    p.loss_pct.fill(30.0);
    p.reorder_pct = 10.0;
    p.duplicate_pct = 5.0;
    p.direct_path_blocked = true;
    return p;
  }
  return std::nullopt;
}

Result<NetProfile, BadConfig> NetProfile::from_config(const Config& cfg) {
  NetProfile p;
  if (cfg.contains("net.preset")) {
    auto name = cfg.get_string("net.preset", "");
    auto preset = NetProfile::preset(name);
    if (!preset) return unexpected(BadConfig{0, "net.preset", "unknown preset '" + name + "'"});
    p = *preset;
  }
  auto seed = cfg.get_int("net.seed", static_cast<long long>(p.seed));
  if (!seed) return unexpected(seed.error());
  p.seed = static_cast<std::uint64_t>(*seed);
  auto lat = cfg.get_int("net.latency_ms", p.base_latency_ms);
  if (!lat) return unexpected(lat.error());
  p.base_latency_ms = *lat;
  auto jit = cfg.get_int("net.jitter_ms", p.jitter_ms);
  if (!jit) return unexpected(jit.error());
  p.jitter_ms = *jit;
  if (cfg.contains("net.loss_pct")) {
    auto all = cfg.get_double("net.loss_pct", 0);
    if (!all) return unexpected(all.error());
    p.loss_pct.fill(*all);
  }
  for (Lane lane : {Lane::Control, Lane::Media, Lane::Signaling}) {
    std::string key = "net.loss_pct." + std::string(to_string(lane));
    auto v = cfg.get_double(key, p.loss_pct[index_of(lane)]);
    if (!v) return unexpected(v.error());
    p.loss_pct[index_of(lane)] = *v;
  }
  auto re = cfg.get_double("net.reorder_pct", p.reorder_pct);
  if (!re) return unexpected(re.error());
  p.reorder_pct = *re;
  auto dup = cfg.get_double("net.duplicate_pct", p.duplicate_pct);
  if (!dup) return unexpected(dup.error());
  p.duplicate_pct = *dup;
  auto blocked = cfg.get_bool("net.direct_blocked", p.direct_path_blocked);
  if (!blocked) return unexpected(blocked.error());
  p.direct_path_blocked = *blocked;
  if (auto why = p.validate()) return unexpected(BadConfig{0, "net", *why});
  return p;
}

DeliveryPlan plan_delivery(const NetProfile& profile, std::uint64_t stream, Lane lane, std::uint64_t index,
                           Millis send_time) {
  Draws draws(mix(profile.seed) ^ mix(stream * 0x632BE59BD9B4E019ULL + index_of(lane)) ^
              (index * 0xD6E8FEB86659FD93ULL));
  const double u_loss = draws.next();
  const double u_jitter = draws.next();
  const double u_dup = draws.next();
  const double u_dup_jitter = draws.next();
  const double u_reorder = draws.next();

  DeliveryPlan plan;
  if (u_loss * 100.0 < profile.loss_pct[index_of(lane)]) return plan;

  auto latency = [&](double u) {
    auto offset = static_cast<Millis>(std::llround((2.0 * u - 1.0) * static_cast<double>(profile.jitter_ms)));
    return std::max<Millis>(0, profile.base_latency_ms + offset);
  };
  plan.deliveries.push_back({send_time + latency(u_jitter), false});
  if (u_dup * 100.0 < profile.duplicate_pct) {
    plan.deliveries.push_back({send_time + latency(u_dup_jitter) + 1, true});
  }
  plan.reorder_with_next = u_reorder * 100.0 < profile.reorder_pct;
  return plan;
}

}  // namespace edgeplay::net
