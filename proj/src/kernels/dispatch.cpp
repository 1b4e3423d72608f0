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

#include <cstdlib>
#include <string>

#include "variants.hpp"

namespace edgeplay::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
  static const bool avx2 = __builtin_cpu_supports("avx2");
  return avx2;
}

const KernelTable& table_for(Isa isa) { return isa == Isa::Avx2 ? detail::kAvx2 : detail::kScalar; }

Isa active_isa() {
  static const Isa chosen = [] {
    const char* env = std::getenv("EDGEPLAY_ISA");
    if (env && std::string(env) == "scalar") return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return chosen;
}

const KernelTable& active() { return table_for(active_isa()); }

}  // namespace edgeplay::kernels
