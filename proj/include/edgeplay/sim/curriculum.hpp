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

#include "edgeplay/common/config.hpp"
#include "edgeplay/common/result.hpp"

namespace edgeplay::sim {

/// Assist schedule. Breakpoints are in global training steps; compress
/// divides every breakpoint by the same factor for desk-scale runs.
struct CurriculumSchedule {
  double start_step = 500000;
  double step_interval = 100000;
  double decrement = 0.2;
  double assist_weight_fraction = 0.5;
  double tilt_deg = 5.0;
  double gravity = 9.81;
  double compress = 1.0;
  bool enabled = true;

  double effective_start() const { return start_step / compress; }
  double effective_interval() const { return step_interval / compress; }

  static Result<CurriculumSchedule, BadConfig> from_config(const Config& cfg);
};

/// lambda(t) = max(0, 1 - decrement * max(0, floor((t - start) / interval))).
/// Plateau values are computed as (n - k) / n with n = round(1 / decrement),
/// so 0.8, 0.6, ... come out as the exact doubles of those literals.
double lambda_at(std::int64_t t, const CurriculumSchedule& sched);

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double norm() const;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Upward assist on the torso: magnitude lambda * fraction * m * g, tilted
/// tilt_deg forward about the heading. Axes are (x, y) planar, z up.
Vec3 assist_force(double heading, double mass, double lambda, const CurriculumSchedule& sched);

}  // namespace edgeplay::sim
