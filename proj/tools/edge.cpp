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

// Edge node: scenes, trainer, renderer and transport in one process serving
// one session through the relay.

#include <CLI11.hpp>

#include <chrono>
#include <thread>

#include "cli_common.hpp"
#include "edgeplay/edge/edge_node.hpp"
#include "edgeplay/edge/script.hpp"
#include "edgeplay/relay/socket.hpp"

using namespace edgeplay;

namespace {

Result<edge::EdgeOptions, BadConfig> stream_options(const Config& cfg) {
  edge::EdgeOptions o;
  auto w = cfg.get_int("stream.width", o.width);
  if (!w) return unexpected(w.error());
  auto h = cfg.get_int("stream.height", o.height);
  if (!h) return unexpected(h.error());
  if (*w <= 0 || *w > 4096) return unexpected(BadConfig{0, "stream.width", "must be in 1..4096"});
  if (*h <= 0 || *h > 4096) return unexpected(BadConfig{0, "stream.height", "must be in 1..4096"});
  o.width = static_cast<std::uint16_t>(*w);
  o.height = static_cast<std::uint16_t>(*h);
  const auto enc = cfg.get_string("stream.encoding", "rle");
  if (enc == "raw") {
    o.encoding = stream::Encoding::Raw;
  } else if (enc != "rle") {
    return unexpected(BadConfig{0, "stream.encoding", "expected raw or rle"});
  }
  auto fps = cfg.get_double("stream.fps", o.fps);
  if (!fps) return unexpected(fps.error());
  o.fps = *fps;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge node"};
  std::string relay_addr, session = "s1", default_scene, config_path, script_path, log_path;
  bool offline = false;
  std::uint64_t seed = 0;
  double compress = 0, fps = 0;
  app.add_option("--relay", relay_addr, "Relay host:port");
  app.add_option("--session", session, "Session id");
  app.add_option("--default-scene", default_scene, "Scene to load at boot");
  app.add_option("--config", config_path, "Config file (falls back to $GEWU_CONFIG)");
  app.add_flag("--offline", offline, "No transport; commands come from --script");
  app.add_option("--script", script_path, "Command script to replay (with --offline)");
  app.add_option("--seed", seed, "Trainer seed");
  app.add_option("--compress", compress, "Curriculum breakpoint divisor")->check(CLI::PositiveNumber);
  app.add_option("--fps", fps, "Frame rate cap")->check(CLI::PositiveNumber);
  app.add_option("--log", log_path, "JSONL log path, - for stdout");
  CLI11_PARSE(app, argc, argv);

  if (!offline && relay_addr.empty()) {
    std::fprintf(stderr, "--relay is required unless --offline\n");
    return cli::kFailure;
  }
  if (!script_path.empty() && !offline) {
    std::fprintf(stderr, "--script requires --offline\n");
    return cli::kFailure;
  }

  auto cfg = cli::load_config(config_path);
  if (!cfg) return cli::kBadConfig;
  auto settings = scenes::SceneSettings::from_config(*cfg);
  auto opts = stream_options(*cfg);
  if (!settings || !opts) {
    std::fprintf(stderr, "BadConfig: %s\n", (!settings ? settings.error() : opts.error()).message().c_str());
    return cli::kBadConfig;
  }
  if (cli::reject_unread(*cfg, {"net."})) return cli::kBadConfig;
  if (app.count("--seed")) settings->trainer.seed = seed;
  if (app.count("--compress")) settings->task.schedule.compress = compress;
  if (app.count("--fps")) opts->fps = fps;
  if (!default_scene.empty()) opts->default_scene = default_scene;

  scenes::PolicyLibrary policies;
  if (auto lib = scenes::load_policy_library(settings->policy_dir)) {
    policies = std::move(*lib);
  } else {
    std::fprintf(stderr, "warning: no policies loaded: %s\n", lib.error().detail.c_str());
  }

  if (log_path.empty()) log_path = offline ? "edge.jsonl" : "-";
  auto log = edge::JsonlLog::open(log_path);
  if (!log) {
    std::fprintf(stderr, "cannot open log %s: %s\n", log_path.c_str(), log.error().c_str());
    return cli::kFailure;
  }
  auto shared = std::make_shared<const scenes::SceneSettings>(std::move(*settings));
  cli::install_stop_handlers();

  if (offline && !script_path.empty()) {
    auto script = edge::load_script(script_path);
    if (!script) {
      std::fprintf(stderr, "script: %s\n", script.error().message().c_str());
      return cli::kFailure;
    }
    // Virtual time: waits cost no wall-clock time.
    VirtualClock clock;
    opts->stream_offline = true;
    edge::EdgeNode node(clock, shared, policies, *opts, *log);
    if (auto b = node.boot(); !b) {
      std::fprintf(stderr, "boot: %s\n", b.error().c_str());
      return cli::kFailure;
    }
    const double tick_ms = 1000.0 / 60.0;
    double t = 0;
    auto advance = [&](Millis ms) {
      const double until = t + static_cast<double>(ms);
      while (t + tick_ms <= until && !cli::g_stop) {
        t += tick_ms;
        clock.set(static_cast<Millis>(t));
        node.tick();
      }
    };
    for (const auto& step : *script) {
      if (step.kind == edge::ScriptStep::Kind::Wait) {
        advance(step.wait_ms);
      } else {
        (void)node.inject(step.type, step.payload);
        node.tick();
      }
    }
    advance(500);
    (*log)->write({{"t", clock.now_ms()},
                   {"event", "done"},
                   {"frames_sent", node.stats().frames_sent},
                   {"envelopes_out", node.stats().envelopes_out},
                   {"sim_steps", node.stats().sim_steps}});
    return cli::kOk;
  }

  SteadyClock clock;
  std::unique_ptr<relay::TcpLink> link;
  std::unique_ptr<transport::Endpoint> endpoint;
  if (!offline) {
    auto hp = relay::parse_host_port(relay_addr);
    if (!hp) {
      std::fprintf(stderr, "RelayUnreachable: %s\n", hp.error().c_str());
      return cli::kRelayUnreachable;
    }
    auto l = relay::TcpLink::connect(hp->host, hp->port);
    if (!l) {
      std::fprintf(stderr, "RelayUnreachable: %s\n", l.error().c_str());
      return cli::kRelayUnreachable;
    }
    link = std::move(*l);
    transport::EndpointOptions eo;
    eo.role = transport::Role::Responder;
    eo.session_id = session;
    eo.source = "edge";
    eo.seed = seed;
    eo.establish_timeout_ms = 0;
    endpoint = std::make_unique<transport::Endpoint>(eo, clock, *link);
  }
  edge::EdgeNode node(clock, shared, policies, *opts, *log);
  if (auto b = node.boot(); !b) {
    std::fprintf(stderr, "boot: %s\n", b.error().c_str());
    return cli::kFailure;
  }
  if (endpoint) {
    node.attach(endpoint.get());
    endpoint->start();
  }
  const auto period = std::chrono::microseconds(16667);
  auto next = std::chrono::steady_clock::now();
  while (!cli::g_stop) {
    node.tick();
    if (endpoint && endpoint->terminal()) {
      const auto f = endpoint->failure();
      std::fprintf(stderr, "%s: %s\n", f ? std::string(transport::to_string(f->code)).c_str() : "Closed",
                   f ? f->detail.c_str() : "session closed");
      (*log)->flush();
      return f && f->code == transport::TransportErrc::SignalingUnreachable ? cli::kRelayUnreachable : cli::kFailure;
    }
    next += period;
    std::this_thread::sleep_until(next);
    if (std::chrono::steady_clock::now() > next + 10 * period) next = std::chrono::steady_clock::now();
  }
  if (endpoint) endpoint->close();
  (*log)->flush();
  return cli::kOk;
}
