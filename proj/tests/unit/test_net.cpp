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

#include <cmath>

#include "doctest.h"
#include "edgeplay/net/harness.hpp"
#include "edgeplay/net/profile.hpp"

using namespace edgeplay;
using namespace edgeplay::net;

TEST_CASE("presets") {
  auto lan = NetProfile::preset("lan");
  REQUIRE(lan);
  CHECK(lan->loss_pct[0] == 0);
  auto wifi = NetProfile::preset("lossy-wifi");
  REQUIRE(wifi);
  CHECK(wifi->base_latency_ms == 20);
  CHECK(wifi->jitter_ms == 10);
  CHECK(wifi->loss_pct[index_of(Lane::Media)] == 5.0);
  auto hostile = NetProfile::preset("hostile");
  REQUIRE(hostile);
  CHECK(hostile->loss_pct[index_of(Lane::Media)] == 30.0);
  CHECK(hostile->reorder_pct == 10.0);
  CHECK(hostile->duplicate_pct == 5.0);
  CHECK(hostile->direct_path_blocked);
  CHECK_FALSE(NetProfile::preset("moon"));
  for (auto n : NetProfile::preset_names()) CHECK_FALSE(NetProfile::preset(n)->validate());
}

TEST_CASE("profile validation and config loading") {
  NetProfile p;
  p.loss_pct[1] = 101;
  CHECK(p.validate());
  auto cfg = Config::parse("net.preset = lossy-wifi\nnet.seed = 9\nnet.loss_pct.media = 12.5\n");
  REQUIRE(cfg);
  auto prof = NetProfile::from_config(*cfg);
  REQUIRE(prof);
  CHECK(prof->seed == 9);
  CHECK(prof->base_latency_ms == 20);
  CHECK(prof->loss_pct[index_of(Lane::Media)] == 12.5);
  CHECK(prof->loss_pct[index_of(Lane::Control)] == 5.0);
  auto bad = Config::parse("net.reorder_pct = 140\n");
  CHECK_FALSE(NetProfile::from_config(*bad));
}

TEST_CASE("clean profile delivers at send time plus base latency") {
  NetProfile p;
  p.base_latency_ms = 7;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto plan = plan_delivery(p, 0, Lane::Media, i, 1000 + static_cast<Millis>(i));
    REQUIRE(plan.deliveries.size() == 1);
    CHECK(plan.deliveries[0].at == 1007 + static_cast<Millis>(i));
    CHECK_FALSE(plan.reorder_with_next);
  }
}

TEST_CASE("schedules are deterministic per seed") {
  auto p = *NetProfile::preset("hostile");
  p.seed = 7;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto a = plan_delivery(p, 1, Lane::Control, i, 10);
    auto b = plan_delivery(p, 1, Lane::Control, i, 10);
    REQUIRE(a.deliveries.size() == b.deliveries.size());
    for (std::size_t k = 0; k < a.deliveries.size(); ++k) CHECK(a.deliveries[k].at == b.deliveries[k].at);
    CHECK(a.reorder_with_next == b.reorder_with_next);
  }
}

TEST_CASE("jitter stays within the configured band") {
  auto p = *NetProfile::preset("lossy-wifi");
  p.loss_pct.fill(0);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto plan = plan_delivery(p, 3, Lane::Media, i, 0);
    CHECK(plan.deliveries[0].at >= 10);
    CHECK(plan.deliveries[0].at <= 30);
  }
}

TEST_CASE("loss rate matches binomial bounds over a seed sweep") {
  // 1000 Bernoulli(0.7) survivors: mean 700, sigma sqrt(1000*0.7*0.3) = 14.49.
  // Frozen 3-sigma band, rounded inward: [657, 743], inside the required [650, 750].
  NetProfile p;
  p.loss_pct[index_of(Lane::Media)] = 30.0;
  const double sigma = std::sqrt(1000 * 0.7 * 0.3);
  CHECK(sigma == doctest::Approx(14.491).epsilon(1e-4));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    p.seed = seed;
    int delivered = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) delivered += !plan_delivery(p, 0, Lane::Media, i, 0).deliveries.empty();
    CHECK(delivered >= 650);
    CHECK(delivered <= 750);
  }
}

TEST_CASE("harness fires in time order and rejects clock regression") {
  Harness h;
  std::vector<int> fired;
  h.schedule_at(5, [&] { fired.push_back(5); });
  h.schedule_at(3, [&] { fired.push_back(3); });
  CHECK(*h.advance(0) == 0);
  CHECK(fired.empty());
  CHECK(*h.advance(10) == 2);
  CHECK(fired == std::vector<int>{3, 5});
  CHECK(h.now() == 10);
  auto back = h.advance(4);
  REQUIRE_FALSE(back);
  CHECK(back.error().now == 10);
  CHECK(back.error().requested == 4);
}

TEST_CASE("events scheduled while firing run in the same advance if due") {
  Harness h;
  std::vector<Millis> seen;
  h.schedule_at(1, [&] {
    seen.push_back(h.now());
    h.schedule_at(2, [&] { seen.push_back(h.now()); });
  });
  CHECK(*h.advance(5) == 2);
  CHECK(seen == std::vector<Millis>{1, 2});
}

TEST_CASE("reorder swaps a held message with the next one") {
  Harness h;
  NetProfile p;
  p.base_latency_ms = 10;
  p.reorder_pct = 100;
  std::vector<int> order;
  HarnessChannel ch(h, p, 0, [&](Lane, Bytes b) { order.push_back(b[0]); });
  ch.send(Lane::Media, Bytes{1});
  (void)h.advance(1);
  ch.send(Lane::Media, Bytes{2});
  (void)h.advance(100);
  CHECK(order == std::vector<int>{2, 1});
}

TEST_CASE("blocked channel delivers nothing; stall holds sends") {
  Harness h;
  NetProfile p;
  int got = 0;
  HarnessChannel ch(h, p, 0, [&](Lane, Bytes) { ++got; });
  ch.set_blocked(true);
  ch.send(Lane::Control, Bytes{1});
  (void)h.advance(100);
  CHECK(got == 0);
  CHECK(ch.stats().dropped[0] == 1);

  ch.set_blocked(false);
  ch.stall_until(200);
  CHECK_FALSE(ch.writable());
  ch.send(Lane::Media, Bytes{1});
  (void)h.advance(199);
  CHECK(got == 0);
  (void)h.advance(200);
  CHECK(got == 1);
  CHECK(ch.writable());
}

TEST_CASE("duplicates arrive as extra copies") {
  Harness h;
  NetProfile p;
  p.duplicate_pct = 100;
  int got = 0;
  HarnessChannel ch(h, p, 0, [&](Lane, Bytes) { ++got; });
  for (int i = 0; i < 10; ++i) ch.send(Lane::Media, Bytes{1});
  (void)h.advance(50);
  CHECK(got == 20);
}
