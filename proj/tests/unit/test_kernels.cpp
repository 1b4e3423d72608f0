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
#include <random>
#include <vector>

#include "doctest.h"
#include "edgeplay/kernels/kernels.hpp"

using namespace edgeplay::kernels;

namespace {

std::vector<Isa> isas() {
  std::vector<Isa> v{Isa::Scalar};
  if (isa_available(Isa::Avx2)) v.push_back(Isa::Avx2);
  return v;
}

// Raster with long runs and isolated single-byte differences, the case that
// trips a byte-shifted comparison.
std::vector<std::uint8_t> runny_raster(std::mt19937& rng, std::size_t pixels) {
  std::vector<std::uint8_t> px(pixels * 3);
  std::uniform_int_distribution<int> len(1, 80), byte(0, 3), coin(0, 9);
  std::size_t i = 0;
  while (i < pixels) {
    std::uint8_t c[3] = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
                         static_cast<std::uint8_t>(byte(rng))};
    for (int k = len(rng); k > 0 && i < pixels; --k, ++i) std::memcpy(&px[3 * i], c, 3);
    if (coin(rng) == 0 && i > 0) px[3 * (i - 1) + byte(rng) % 3] ^= 1;
  }
  return px;
}

}  // namespace

TEST_CASE("scalar run_length matches a pixel-wise oracle") {
  std::mt19937 rng(3);
  auto px = runny_raster(rng, 4000);
  const auto& k = table_for(Isa::Scalar);
  for (std::size_t s = 0; s < 4000; s += 7) {
    std::size_t expect = 1;
    while (s + expect < 4000 && expect < 255 && px[3 * (s + expect)] == px[3 * s] &&
           px[3 * (s + expect) + 1] == px[3 * s + 1] && px[3 * (s + expect) + 2] == px[3 * s + 2])
      ++expect;
    CHECK(k.run_length(px.data(), 4000, s, 255) == expect);
  }
}

TEST_CASE("run_length variants agree on every start offset") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + rng() % 3000;
    auto px = runny_raster(rng, n);
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t cap = 1 + rng() % 400;
      auto ref = table_for(Isa::Scalar).run_length(px.data(), n, s, cap);
      for (auto isa : isas()) REQUIRE(table_for(isa).run_length(px.data(), n, s, cap) == ref);
    }
  }
}

TEST_CASE("fill_span variants write identical rows and nothing outside the span") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t w = 1 + rng() % 700;
    std::size_t x0 = rng() % w, x1 = x0 + rng() % (w - x0 + 1);
    std::vector<std::uint8_t> ref(w * 3);
    for (auto& b : ref) b = static_cast<std::uint8_t>(rng());
    auto base = ref;
    std::uint8_t r = rng(), g = rng(), b = rng();
    table_for(Isa::Scalar).fill_span(ref.data(), x0, x1, r, g, b);
    for (std::size_t x = 0; x < w; ++x) {
      bool inside = x >= x0 && x < x1;
      CHECK(ref[3 * x] == (inside ? r : base[3 * x]));
    }
    for (auto isa : isas()) {
      auto row = base;
      table_for(isa).fill_span(row.data(), x0, x1, r, g, b);
      REQUIRE(row == ref);
    }
  }
}

TEST_CASE("matvec variants are bit-identical and match a row-order oracle") {
  std::mt19937 rng(9);
  std::normal_distribution<float> n01(0.f, 1.f);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t in = 1 + rng() % 40, out = 1 + rng() % 40;
    std::vector<float> wt(in * out), b(out), x(in);
    for (auto& v : wt) v = n01(rng);
    for (auto& v : b) v = n01(rng);
    for (auto& v : x) v = n01(rng);
    std::vector<float> oracle(out);
    for (std::size_t o = 0; o < out; ++o) {
      volatile float s = b[o];
      for (std::size_t j = 0; j < in; ++j) {
        volatile float p = wt[j * out + o] * x[j];
        s = s + p;
      }
      oracle[o] = s;
    }
    for (auto isa : isas()) {
      std::vector<float> y(out);
      table_for(isa).matvec_t(wt.data(), b.data(), x.data(), y.data(), in, out);
      REQUIRE(std::memcmp(y.data(), oracle.data(), out * sizeof(float)) == 0);
    }
  }
}

TEST_CASE("dispatch picks an available ISA") {
  CHECK(isa_available(active_isa()));
  CHECK(isa_available(Isa::Scalar));
  MESSAGE("active kernels: " << to_string(active_isa()));
}
