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

// Built with -mavx2 only; nothing here may be called unless the CPU has it.

#include <immintrin.h>

#include <cstring>

#include "variants.hpp"

namespace edgeplay::kernels::detail {
namespace {

void fill_span(std::uint8_t* row, std::size_t x0, std::size_t x1, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  // 32 pixels are exactly three 32-byte vectors.
  alignas(32) std::uint8_t pattern[96];
  for (int i = 0; i < 32; ++i) {
    pattern[3 * i] = r;
    pattern[3 * i + 1] = g;
    pattern[3 * i + 2] = b;
  }
  const __m256i p0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern));
  const __m256i p1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 32));
  const __m256i p2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 64));
  std::size_t x = x0;
  for (; x + 32 <= x1; x += 32) {
    auto* dst = reinterpret_cast<__m256i*>(row + 3 * x);
    _mm256_storeu_si256(dst, p0);
    _mm256_storeu_si256(dst + 1, p1);
    _mm256_storeu_si256(dst + 2, p2);
  }
  for (; x < x1; ++x) std::memcpy(row + 3 * x, pattern, 3);
}

// Pixel i equals pixel i+1 iff bytes [3i, 3i+3) equal bytes [3i+3, 3i+6),
// so the run ends at the first byte k with px[k] != px[k+3].
std::size_t run_length(const std::uint8_t* px, std::size_t n, std::size_t start, std::size_t max_run) {
  std::size_t end = start + max_run < n ? start + max_run : n;
  if (end - start <= 1) return end - start;
  std::size_t k = 3 * start;
  const std::size_t k_end = 3 * (end - 1);  // compare bytes k < k_end against k + 3
  while (k + 32 <= k_end) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(px + k));
    __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(px + k + 3));
    auto eq = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a, c)));
    if (eq != 0xFFFFFFFFu) {
      k += static_cast<std::size_t>(__builtin_ctz(~eq));
      return k / 3 - start + 1;
    }
    k += 32;
  }
  while (k < k_end && px[k] == px[k + 3]) ++k;
  return k / 3 - start + 1;
}

// Eight outputs per lane group; each output still sums in ascending j with a
// rounded product, which keeps the result identical to the scalar loop.
void matvec_t(const float* wt, const float* b, const float* x, float* y, std::size_t in, std::size_t out) {
  std::size_t o = 0;
  for (; o + 8 <= out; o += 8) {
    __m256 s = _mm256_loadu_ps(b + o);
    for (std::size_t j = 0; j < in; ++j) {
      __m256 w = _mm256_loadu_ps(wt + j * out + o);
      s = _mm256_add_ps(s, _mm256_mul_ps(w, _mm256_set1_ps(x[j])));
    }
    _mm256_storeu_ps(y + o, s);
  }
  for (; o < out; ++o) {
    float s = b[o];
    for (std::size_t j = 0; j < in; ++j) {
      float p = wt[j * out + o] * x[j];
      s = s + p;
    }
    y[o] = s;
  }
}

}  // namespace

const KernelTable kAvx2{fill_span, run_length, matvec_t};

}  // namespace edgeplay::kernels::detail
