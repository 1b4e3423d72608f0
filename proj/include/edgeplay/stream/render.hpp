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

#include "edgeplay/scene/runtime.hpp"
#include "edgeplay/stream/frame.hpp"

namespace edgeplay::stream {

struct Rgb {
  std::uint8_t r, g, b;
};
inline constexpr Rgb kBackground{200, 222, 240};
inline constexpr Rgb kAssistArrow{220, 40, 40};

/// Orthographic side view. Deterministic: the same view and camera give
/// the same bytes. The camera centre follows view.focus_x when set.
Raster render(const scene::SceneView& view, const scene::Camera& camera, std::uint16_t width, std::uint16_t height);

/// Pixel box of the assist arrow for a view, for tests: x0, y0, x1, y1
/// inclusive-exclusive. Empty when the arrow is not drawn.
struct PixelBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};
PixelBox assist_arrow_box(const scene::SceneView& view, const scene::Camera& camera, std::uint16_t width,
                          std::uint16_t height);

}  // namespace edgeplay::stream
