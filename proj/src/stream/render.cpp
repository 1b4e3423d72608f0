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

#include "edgeplay/stream/render.hpp"

#include <algorithm>
#include <cmath>

#include "edgeplay/kernels/kernels.hpp"

namespace edgeplay::stream {
namespace {

constexpr double kArrowLength = 0.6;  // metres at lambda = 1
constexpr double kArrowWidth = 0.04;

struct Canvas {
  Raster& img;
  double cx, cz, ppm;

  double px(double x) const { return img.width / 2.0 + (x - cx) * ppm; }
  double py(double z) const { return img.height / 2.0 - (z - cz) * ppm; }

  void span(int row, double xl, double xr, Rgb c) {
    if (row < 0 || row >= img.height) return;
    const int a = std::max(0, static_cast<int>(std::ceil(xl - 0.5)));
    const int b = std::min(static_cast<int>(img.width), static_cast<int>(std::floor(xr - 0.5)) + 1);
    if (b <= a) return;
    kernels::active().fill_span(img.rgb.data() + static_cast<std::size_t>(row) * img.width * 3, a, b, c.r, c.g, c.b);
  }

  void box(double x0, double z0, double x1, double z1, Rgb c) {
    const double l = px(std::min(x0, x1)), r = px(std::max(x0, x1));
    const double top = py(std::max(z0, z1)), bottom = py(std::min(z0, z1));
    const int r0 = std::max(0, static_cast<int>(std::ceil(top - 0.5)));
    const int r1 = std::min(static_cast<int>(img.height) - 1, static_cast<int>(std::floor(bottom - 0.5)));
    for (int row = r0; row <= r1; ++row) span(row, l, r, c);
  }

  void disc(double x, double z, double radius, Rgb c) {
    const double pcx = px(x), pcy = py(z), pr = radius * ppm;
    const int r0 = std::max(0, static_cast<int>(std::ceil(pcy - pr - 0.5)));
    const int r1 = std::min(static_cast<int>(img.height) - 1, static_cast<int>(std::floor(pcy + pr - 0.5)));
    for (int row = r0; row <= r1; ++row) {
      const double dy = row + 0.5 - pcy;
      const double h = pr * pr - dy * dy;
      if (h < 0) continue;
      const double w = std::sqrt(h);
      span(row, pcx - w, pcx + w, c);
    }
  }

  // Capsule: every pixel centre within width/2 of the segment.
  void segment(double x0, double z0, double x1, double z1, double width, Rgb c) {
    const double ax = px(x0), ay = py(z0), bx = px(x1), by = py(z1);
    const double hw = std::max(0.5, width * ppm / 2);
    const double dx = bx - ax, dy = by - ay, len2 = dx * dx + dy * dy;
    const int r0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - hw)));
    const int r1 = std::min(static_cast<int>(img.height) - 1, static_cast<int>(std::ceil(std::max(ay, by) + hw)));
    const int c0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - hw)));
    const int c1 = std::min(static_cast<int>(img.width) - 1, static_cast<int>(std::ceil(std::max(ax, bx) + hw)));
    for (int row = r0; row <= r1; ++row) {
      int first = -1, last = -1;
      const double y = row + 0.5;
      for (int col = c0; col <= c1; ++col) {
        const double x = col + 0.5;
        double t = len2 > 0 ? ((x - ax) * dx + (y - ay) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double ex = ax + t * dx - x, ey = ay + t * dy - y;
        if (ex * ex + ey * ey <= hw * hw) {
          if (first < 0) first = col;
          last = col;
        }
      }
      if (first >= 0) span(row, first + 0.5, last + 0.5, c);
    }
  }
};

struct ArrowGeom {
  double x0, z0, x1, z1;
};

ArrowGeom arrow_geometry(const scene::SceneView& view) {
  const double len = kArrowLength * view.assist_lambda;
  return {view.assist_x, view.assist_z, view.assist_x + len * std::sin(view.assist_tilt_rad),
          view.assist_z + len * std::cos(view.assist_tilt_rad)};
}

}  // namespace

Raster render(const scene::SceneView& view, const scene::Camera& camera, std::uint16_t width, std::uint16_t height) {
  Raster img(width, height);
  Canvas cv{img, view.focus_x.value_or(camera.center_x), camera.center_z, camera.pixels_per_metre};
  for (int row = 0; row < height; ++row) cv.span(row, 0.0, width - 0.5, kBackground);
  for (const auto& s : view.shapes) {
    const Rgb c{s.r, s.g, s.b};
    switch (s.kind) {
      case scene::Shape::Kind::Box: cv.box(s.x0, s.z0, s.x1, s.z1, c); break;
      case scene::Shape::Kind::Disc: cv.disc(s.x0, s.z0, s.size, c); break;
      case scene::Shape::Kind::Segment: cv.segment(s.x0, s.z0, s.x1, s.z1, s.size, c); break;
    }
  }
  if (view.assist_lambda > 0) {
    const auto a = arrow_geometry(view);
    cv.segment(a.x0, a.z0, a.x1, a.z1, kArrowWidth, kAssistArrow);
    cv.disc(a.x1, a.z1, kArrowWidth * 1.5, kAssistArrow);
  }
  return img;
}

PixelBox assist_arrow_box(const scene::SceneView& view, const scene::Camera& camera, std::uint16_t width,
                          std::uint16_t height) {
  if (view.assist_lambda <= 0) return {};
  Raster dummy(1, 1);
  dummy.width = width;
  dummy.height = height;
  Canvas cv{dummy, view.focus_x.value_or(camera.center_x), camera.center_z, camera.pixels_per_metre};
  const auto a = arrow_geometry(view);
  const double pad = kArrowWidth * 1.5 * camera.pixels_per_metre + 1;
  PixelBox b;
  b.x0 = std::max(0, static_cast<int>(std::floor(std::min(cv.px(a.x0), cv.px(a.x1)) - pad)));
  b.x1 = std::min(static_cast<int>(width), static_cast<int>(std::ceil(std::max(cv.px(a.x0), cv.px(a.x1)) + pad)));
  b.y0 = std::max(0, static_cast<int>(std::floor(std::min(cv.py(a.z0), cv.py(a.z1)) - pad)));
  b.y1 = std::min(static_cast<int>(height), static_cast<int>(std::ceil(std::max(cv.py(a.z0), cv.py(a.z1)) + pad)));
  return b;
}

}  // namespace edgeplay::stream
