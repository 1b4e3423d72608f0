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

#include "edgeplay/edge/script.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace edgeplay::edge {
namespace {

Result<double, std::string> number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return unexpected("not a number: " + s);
    return v;
  } catch (const std::exception&) {
    return unexpected("not a number: " + s);
  }
}

Result<Millis, std::string> duration(const std::string& s) {
  double scale = 1000;
  std::string digits = s;
  if (s.size() > 2 && s.ends_with("ms")) {
    scale = 1;
    digits = s.substr(0, s.size() - 2);
  } else if (s.size() > 1 && s.back() == 's') {
    digits = s.substr(0, s.size() - 1);
  }
  auto v = number(digits);
  if (!v) return unexpected(v.error());
  if (*v < 0) return unexpected("negative wait");
  return static_cast<Millis>(std::llround(*v * scale));
}

}  // namespace

Result<std::vector<ScriptStep>, ScriptError> parse_script(std::string_view text) {
  std::vector<ScriptStep> steps;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos && raw.find('{') > hash) raw.resize(hash);
    std::istringstream words(raw);
    std::string cmd;
    if (!(words >> cmd)) continue;
    std::vector<std::string> args;
    for (std::string w; words >> w;) args.push_back(w);
    auto fail = [&](std::string why) { return unexpected(ScriptError{line, std::move(why)}); };

    ScriptStep st;
    st.line = line;
    if (cmd == "wait") {
      if (args.size() != 1) return fail("wait takes one duration");
      auto d = duration(args[0]);
      if (!d) return fail(d.error());
      st.kind = ScriptStep::Kind::Wait;
      st.wait_ms = *d;
    } else if (cmd == "load") {
      if (args.size() != 1) return fail("load takes a scene name");
      st.type = "scene.load";
      st.payload = {{"scene", args[0]}};
    } else if (cmd == "train") {
      if (args.size() != 1 || (args[0] != "on" && args[0] != "off")) return fail("train takes on or off");
      st.type = "training.set_flag";
      st.payload = {{"training", args[0] == "on"}};
    } else if (cmd == "policy") {
      if (args.size() != 1) return fail("policy takes a name");
      st.type = "policy.switch";
      st.payload = {{"name", args[0]}};
    } else if (cmd == "move") {
      if (args.size() < 3 || args.size() > 4) return fail("move takes dx dy speed [mode]");
      double v[3];
      for (int i = 0; i < 3; ++i) {
        auto n = number(args[static_cast<std::size_t>(i)]);
        if (!n) return fail(n.error());
        v[i] = *n;
      }
      st.type = "control.move";
      st.payload = {{"dir", {v[0], v[1]}}, {"speed", v[2]}};
      if (args.size() == 4) st.payload["mode"] = args[3];
    } else if (cmd == "send") {
      const auto at = raw.find(cmd) + cmd.size();
      std::istringstream rest(raw.substr(at));
      if (!(rest >> st.type)) return fail("send takes a type and a JSON payload");
      std::string json;
      std::getline(rest, json);
      if (json.find_first_not_of(" \t") == std::string::npos) json = "{}";
      auto parsed = nlohmann::json::parse(json, nullptr, false);
      if (parsed.is_discarded()) return fail("bad JSON payload");
      st.payload = std::move(parsed);
    } else {
      return fail("unknown command '" + cmd + "'");
    }
    steps.push_back(std::move(st));
  }
  return steps;
}

Result<std::vector<ScriptStep>, ScriptError> load_script(const std::string& path) {
  std::ifstream f(path);
  if (!f) return unexpected(ScriptError{0, "cannot open " + path});
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_script(ss.str());
}

Millis script_duration(const std::vector<ScriptStep>& steps) {
  Millis total = 0;
  for (auto& s : steps) total += s.wait_ms;
  return total;
}

}  // namespace edgeplay::edge
