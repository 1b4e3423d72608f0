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

// Session relay: signaling plus the fallback byte lanes, with a plain-text
// health endpoint.

#include <CLI11.hpp>

#include <chrono>
#include <thread>

#include <spdlog/spdlog.h>

#include "cli_common.hpp"
#include "edgeplay/relay/socket.hpp"

using namespace edgeplay;

int main(int argc, char** argv) {
  CLI::App app{"Session relay"};
  relay::RelayServer::Options so;
  std::string host = "0.0.0.0", level = "info";
  double ttl_s = 600;
  app.add_option("--host", so.host, "Listen address")->envname("EDGEPLAY_RELAY_HOST");
  app.add_option("--port", so.port, "Relay port, 0 for any")->envname("EDGEPLAY_RELAY_PORT");
  app.add_option("--health-port", so.health_port, "Health port, 0 for any, -1 to disable")
      ->envname("EDGEPLAY_HEALTH_PORT");
  app.add_option("--room-ttl-s", ttl_s, "Idle room lifetime")->envname("EDGEPLAY_ROOM_TTL_S")->check(CLI::PositiveNumber);
  app.add_option("--log-level", level, "trace, debug, info, warn, error")->envname("EDGEPLAY_LOG_LEVEL");
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(spdlog::level::from_str(level));
  SteadyClock clock;
  relay::Relay::Options ro;
  ro.room_ttl_ms = static_cast<Millis>(ttl_s * 1000);
  relay::Relay relay(ro);
  relay::RelayServer server(relay, clock, so);
  if (auto r = server.start(); !r) {
    spdlog::error("{}", r.error());
    return cli::kFailure;
  }
  spdlog::info("relay listening on {}:{} health {}", so.host, server.port(), server.health_port());
  std::fflush(stdout);
  cli::install_stop_handlers();
  auto last = relay.stats();
  while (!cli::g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    const auto s = relay.stats();
    if (s.joins != last.joins || s.rooms_expired != last.rooms_expired)
      spdlog::debug("rooms_open={} joins={} expired={}", s.rooms_open, s.joins, s.rooms_expired);
    last = s;
  }
  server.stop();
  spdlog::info("relay stopped");
  return cli::kOk;
}
