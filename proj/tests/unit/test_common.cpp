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

#include "doctest.h"
#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/config.hpp"
#include "edgeplay/common/result.hpp"

using namespace edgeplay;

TEST_CASE("config parses key = value lines with comments") {
  auto cfg = Config::parse("# header\n\ntrainer.seed = 42\n  physics.mu=0.8  \nflag = on\nname = hello world\n");
  REQUIRE(cfg);
  CHECK(*cfg->get_int("trainer.seed", 0) == 42);
  CHECK(*cfg->get_double("physics.mu", 0) == doctest::Approx(0.8));
  CHECK(*cfg->get_bool("flag", false));
  CHECK(cfg->get_string("name", "") == "hello world");
  CHECK(*cfg->get_int("missing", 7) == 7);
}

TEST_CASE("config errors name the line and key") {
  auto bad = Config::parse("a.b = 1\nthis line has no equals\n");
  REQUIRE_FALSE(bad);
  CHECK(bad.error().line == 2);

  auto dup = Config::parse("a = 1\na = 2\n");
  REQUIRE_FALSE(dup);
  CHECK(dup.error().line == 2);
  CHECK(dup.error().key == "a");

  auto cfg = Config::parse("x = 1\nphysics.mu = fast\n");
  REQUIRE(cfg);
  auto mu = cfg->get_double("physics.mu", 0.8);
  REQUIRE_FALSE(mu);
  CHECK(mu.error().line == 2);
  CHECK(mu.error().key == "physics.mu");
  CHECK(mu.error().message().find("physics.mu") != std::string::npos);

  auto unknown = cfg->check_known({"physics."});
  REQUIRE_FALSE(unknown);
  CHECK(unknown.error().key == "x");
}

TEST_CASE("big-endian helpers") {
  Bytes b;
  put_u16_be(b, 0x0102);
  put_u32_be(b, 0x03040506);
  put_u64_be(b, 0x0708090A0B0C0D0EULL);
  put_u32_le(b, 0x11223344);
  CHECK(b == Bytes{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 0x44, 0x33, 0x22, 0x11});
  CHECK(get_u16_be(b.data()) == 0x0102);
  CHECK(get_u32_be(b.data() + 2) == 0x03040506);
  CHECK(get_u64_be(b.data() + 6) == 0x0708090A0B0C0D0EULL);
  CHECK(get_u32_le(b.data() + 14) == 0x11223344);
}

TEST_CASE("result carries a value or an error") {
  Result<int, std::string> ok = 3;
  Result<int, std::string> bad = unexpected(std::string("no"));
  CHECK(ok.has_value());
  CHECK(*ok == 3);
  CHECK(bad.error() == "no");
  CHECK(bad.value_or(9) == 9);
  Result<void, int> v;
  CHECK(v);
  Result<void, int> e = unexpected(4);
  CHECK(e.error() == 4);
}
