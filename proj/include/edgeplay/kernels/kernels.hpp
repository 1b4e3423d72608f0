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

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace edgeplay::kernels {

enum class Isa { Scalar, Avx2 };
std::string_view to_string(Isa isa);

/// Hot loops of the renderer, the frame encoder and policy inference. Every
/// variant returns bit-identical results to the scalar reference.
struct KernelTable {
  /// Writes pixels [x0, x1) of an RGB8 row with one colour.
  void (*fill_span)(std::uint8_t* row, std::size_t x0, std::size_t x1, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  /// Number of consecutive pixels equal to px[start], counting px[start]
  /// itself, scanning no further than max_run pixels. Requires start < n.
  std::size_t (*run_length)(const std::uint8_t* px, std::size_t n, std::size_t start, std::size_t max_run);
  /// y[o] = b[o] + sum_j wt[j * out + o] * x[j], summed in ascending j with
  /// separate multiply and add. wt is the transposed weight matrix.
  void (*matvec_t)(const float* wt, const float* b, const float* x, float* y, std::size_t in, std::size_t out);
};

bool isa_available(Isa isa);
/// Table for a specific ISA. Requires isa_available(isa).
const KernelTable& table_for(Isa isa);
/// Table picked at first use: AVX2 when the CPU has it, else scalar. The
/// EDGEPLAY_ISA environment variable (scalar|avx2) overrides the choice.
const KernelTable& active();
Isa active_isa();

}  // namespace edgeplay::kernels
