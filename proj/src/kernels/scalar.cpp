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

#include <cstring>

#include "variants.hpp"

namespace edgeplay::kernels::detail {
namespace {

void fill_span(std::uint8_t* row, std::size_t x0, std::size_t x1, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  for (std::size_t x = x0; x < x1; ++x) {
    row[3 * x] = r;
    row[3 * x + 1] = g;
    row[3 * x + 2] = b;
  }
}

std::size_t run_length(const std::uint8_t* px, std::size_t n, std::size_t start, std::size_t max_run) {
  std::size_t end = start + max_run < n ? start + max_run : n;
  std::size_t i = start + 1;
  while (i < end && std::memcmp(px + 3 * i, px + 3 * start, 3) == 0) ++i;
  return i - start;
}

void matvec_t(const float* wt, const float* b, const float* x, float* y, std::size_t in, std::size_t out) {
  for (std::size_t o = 0; o < out; ++o) {
    float s = b[o];
    for (std::size_t j = 0; j < in; ++j) {
      float p = wt[j * out + o] * x[j];
      s = s + p;
    }
    y[o] = s;
  }
}

}  // namespace

const KernelTable kScalar{fill_span, run_length, matvec_t};

}  // namespace edgeplay::kernels::detail
