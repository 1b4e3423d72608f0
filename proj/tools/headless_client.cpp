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

// Scripted browser stand-in for end-to-end runs.

#include <CLI11.hpp>

#include <chrono>
#include <thread>

#include "cli_common.hpp"
#include "edgeplay/edge/client.hpp"
#include "edgeplay/relay/socket.hpp"

using namespace edgeplay;

int main(int argc, char** argv) {
  CLI::App app{"Headless scripted client"};
  std::string relay_addr, session = "s1", script_path, log_path = "client.jsonl", frames_path;
  std::uint64_t seed = 1;
  Millis establish_ms = 10000, drain_ms = 1000;
  app.add_option("--relay", relay_addr, "Relay host:port")->required();
  app.add_option("--session", session, "Session id");
  app.add_option("--script", script_path, "Command script")->required();
  app.add_option("--log", log_path, "Received envelopes, JSONL");
  app.add_option("--frames", frames_path, "Displayed frame seqs, JSONL");
  app.add_option("--seed", seed, "Id seed");
  app.add_option("--establish-timeout-ms", establish_ms, "Give up connecting after this long");
  app.add_option("--drain-ms", drain_ms, "Keep receiving this long after the script ends");
  CLI11_PARSE(app, argc, argv);

  auto script = edge::load_script(script_path);
  if (!script) {
    std::fprintf(stderr, "script: %s\n", script.error().message().c_str());
    return cli::kFailure;
  }
  auto hp = relay::parse_host_port(relay_addr);
  if (!hp) {
    std::fprintf(stderr, "RelayUnreachable: %s\n", hp.error().c_str());
    return cli::kRelayUnreachable;
  }
  auto link = relay::TcpLink::connect(hp->host, hp->port);
  if (!link) {
    std::fprintf(stderr, "RelayUnreachable: %s\n", link.error().c_str());
    return cli::kRelayUnreachable;
  }
  auto log = edge::JsonlLog::open(log_path);
  if (!log) {
    std::fprintf(stderr, "cannot open %s: %s\n", log_path.c_str(), log.error().c_str());
    return cli::kFailure;
  }
  std::shared_ptr<edge::JsonlLog> frames;
  if (!frames_path.empty()) {
    auto f = edge::JsonlLog::open(frames_path);
    if (!f) {
      std::fprintf(stderr, "cannot open %s: %s\n", frames_path.c_str(), f.error().c_str());
      return cli::kFailure;
    }
    frames = *f;
  }

  SteadyClock clock;
  edge::ClientOptions co;
  co.session = session;
  co.seed = seed;
  co.establish_timeout_ms = establish_ms;
  edge::HeadlessClient client(clock, **link, co, *log, frames);
  cli::install_stop_handlers();
  auto pump = [&](Millis ms) {
    const auto until = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
    do {
      client.tick();
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    } while (std::chrono::steady_clock::now() < until && !cli::g_stop);
  };

  client.start();
  const auto give_up = std::chrono::steady_clock::now() + std::chrono::milliseconds(establish_ms);
  while (!client.connected()) {
    if (client.failed() || std::chrono::steady_clock::now() > give_up || cli::g_stop) {
      const auto f = client.endpoint().failure();
      std::fprintf(stderr, "%s: %s\n", f ? std::string(transport::to_string(f->code)).c_str() : "EstablishTimeout",
                   f ? f->detail.c_str() : "no session");
      return f && f->code == transport::TransportErrc::SignalingUnreachable ? cli::kRelayUnreachable
                                                                            : cli::kEstablishFailed;
    }
    pump(5);
  }
  for (const auto& step : *script) {
    if (step.kind == edge::ScriptStep::Kind::Wait) {
      pump(step.wait_ms);
    } else if (!client.send(step)) {
      std::fprintf(stderr, "send failed at script line %d\n", step.line);
      return cli::kFailure;
    }
  }
  pump(drain_ms);
  (*log)->write({{"event", "done"},
                 {"received", client.received().size()},
                 {"frames", client.frame_seqs().size()},
                 {"frame_errors", client.frame_errors()}});
  std::printf("received %zu envelopes, %zu frames\n", client.received().size(), client.frame_seqs().size());
  return cli::kOk;
}
