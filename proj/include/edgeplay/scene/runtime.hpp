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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edgeplay/common/clock.hpp"
#include "edgeplay/protocol/envelope.hpp"

namespace edgeplay::scene {

/// Viewpoint of the side-view renderer, repositioned by each scene when it
/// becomes active.
struct Camera {
  double center_x = 0.0;  // world metres at the image centre
  double center_z = 0.6;
  double pixels_per_metre = 80.0;
  std::string scene;

  friend bool operator==(const Camera&, const Camera&) = default;
};

enum class HandleResult { Handled, Unsupported, Rejected };

/// Rejected carries the error code sent back to the client.
struct HandleOutcome {
  HandleResult result = HandleResult::Handled;
  std::string detail;
  std::string code;

  static HandleOutcome handled() { return {}; }
  static HandleOutcome unsupported(std::string why) { return {HandleResult::Unsupported, std::move(why), "Unsupported"}; }
  static HandleOutcome rejected(std::string code, std::string why) {
    return {HandleResult::Rejected, std::move(why), std::move(code)};
  }
};

/// Services a runtime may use. emit() sends a typed envelope to the client.
struct SceneContext {
  std::function<void(std::string type, nlohmann::json payload)> emit;
  const Clock* clock = nullptr;
};

/// Side-view drawing list in world metres (x right, z up). The frame
/// renderer turns it into pixels through the Camera.
struct Shape {
  enum class Kind { Segment, Disc, Box };
  Kind kind = Kind::Segment;
  double x0 = 0, z0 = 0, x1 = 0, z1 = 0;  // Box: corners; Disc: centre in (x0, z0)
  double size = 0;  // Segment: line width; Disc: radius
  std::uint8_t r = 0, g = 0, b = 0;
};

struct SceneView {
  std::vector<Shape> shapes;
  /// World x the camera should centre on this frame, if the scene tracks a body.
  std::optional<double> focus_x;
  /// Assist arrow, drawn only when lambda > 0: from (x, z), length
  /// proportional to lambda, tilted forward by tilt_rad.
  double assist_lambda = 0;
  double assist_x = 0, assist_z = 0, assist_tilt_rad = 0;
};

/// A loaded scene. Runs on the main loop only.
class SceneRuntime {
 public:
  virtual ~SceneRuntime() = default;
  virtual HandleOutcome handle(const protocol::Envelope& env) = 0;
  virtual void step(double /*dt*/) {}
  virtual void on_activate(Camera& /*camera*/) {}
  virtual void on_deactivate() {}
  virtual void describe(SceneView& /*view*/) const {}
};

using RuntimeFactory = std::function<std::unique_ptr<SceneRuntime>(const SceneContext&)>;

}  // namespace edgeplay::scene
