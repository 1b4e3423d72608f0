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

#include "edgeplay/sim/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgeplay::sim {

Result<CurriculumSchedule, BadConfig> CurriculumSchedule::from_config(const Config& cfg) {
  CurriculumSchedule s;
  auto num = [&](const char* key, double& out) -> Result<void, BadConfig> {
    auto v = cfg.get_double(key, out);
    if (!v) return unexpected(v.error());
    out = *v;
    return {};
  };
  for (auto [key, field] : {std::pair{"curriculum.start_step", &s.start_step},
                            std::pair{"curriculum.step_interval", &s.step_interval},
                            std::pair{"curriculum.decrement", &s.decrement},
                            std::pair{"curriculum.assist_fraction", &s.assist_weight_fraction},
                            std::pair{"curriculum.tilt_deg", &s.tilt_deg}, std::pair{"physics.gravity", &s.gravity},
                            std::pair{"curriculum.compress", &s.compress}}) {
    if (auto r = num(key, *field); !r) return unexpected(r.error());
  }
  auto en = cfg.get_bool("curriculum.enabled", s.enabled);
  if (!en) return unexpected(en.error());
  s.enabled = *en;
  if (s.compress <= 0) return unexpected(BadConfig{0, "curriculum.compress", "must be > 0"});
  if (s.step_interval <= 0) return unexpected(BadConfig{0, "curriculum.step_interval", "must be > 0"});
  if (s.decrement <= 0 || s.decrement > 1) return unexpected(BadConfig{0, "curriculum.decrement", "must be in (0, 1]"});
  return s;
}

double lambda_at(std::int64_t t, const CurriculumSchedule& sched) {
  if (!sched.enabled) return 0.0;
  const double start = sched.effective_start();
  const double td = static_cast<double>(t);
  if (td < start) return 1.0;
  const auto k = static_cast<std::int64_t>(std::floor((td - start) / sched.effective_interval()));
  const auto n = static_cast<std::int64_t>(std::llround(1.0 / sched.decrement));
  if (n * sched.decrement == 1.0) return k >= n ? 0.0 : static_cast<double>(n - k) / static_cast<double>(n);
  return std::max(0.0, 1.0 - sched.decrement * static_cast<double>(k));
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 assist_force(double heading, double mass, double lambda, const CurriculumSchedule& sched) {
  if (lambda <= 0.0) return {};
  const double magnitude = lambda * sched.assist_weight_fraction * mass * sched.gravity;
  const double tilt = sched.tilt_deg * std::numbers::pi / 180.0;
  const double horizontal = magnitude * std::sin(tilt);
  return {horizontal * std::cos(heading), horizontal * std::sin(heading), magnitude * std::cos(tilt)};
}

}  // namespace edgeplay::sim
