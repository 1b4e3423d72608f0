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

#include "edgeplay/sim/policy.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "edgeplay/kernels/kernels.hpp"

namespace edgeplay::sim {

Mlp::Mlp(const std::vector<std::size_t>& sizes, std::mt19937_64& rng, float last_layer_scale) {
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    Dense d;
    d.in = sizes[i];
    d.out = sizes[i + 1];
    const bool last = i + 2 == sizes.size();
    const float scale = std::sqrt(2.0f / static_cast<float>(d.in)) * (last ? last_layer_scale : 1.0f);
    std::normal_distribution<float> init(0.f, scale);
    d.wt.resize(d.in * d.out);
    // Drawn in row-major [out][in] order, stored transposed.
    for (std::size_t o = 0; o < d.out; ++o)
      for (std::size_t j = 0; j < d.in; ++j) d.wt[j * d.out + o] = init(rng);
    d.b.assign(d.out, 0.f);
    d.g_wt.assign(d.wt.size(), 0.f);
    d.g_b.assign(d.out, 0.f);
    d.m_wt = d.v_wt = d.g_wt;
    d.m_b = d.v_b = d.g_b;
    layers_.push_back(std::move(d));
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (auto& d : layers_) n += d.wt.size() + d.b.size();
  return n;
}

void Mlp::forward(const float* x, std::vector<std::vector<float>>& acts) const {
  const auto& k = kernels::active();
  acts.resize(layers_.size() + 1);
  acts[0].assign(x, x + layers_.front().in);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& d = layers_[i];
    acts[i + 1].resize(d.out);
    k.matvec_t(d.wt.data(), d.b.data(), acts[i].data(), acts[i + 1].data(), d.in, d.out);
    if (i + 1 < layers_.size())
      for (auto& a : acts[i + 1]) a = std::tanh(a);
  }
}

void Mlp::backward(const std::vector<std::vector<float>>& acts, std::vector<float> grad_out) {
  for (std::size_t li = layers_.size(); li-- > 0;) {
    auto& d = layers_[li];
    std::vector<float> grad_in(d.in, 0.f);
    for (std::size_t o = 0; o < d.out; ++o) {
      const float g = grad_out[o];
      d.g_b[o] += g;
      for (std::size_t j = 0; j < d.in; ++j) {
        d.g_wt[j * d.out + o] += g * acts[li][j];
        grad_in[j] += g * d.wt[j * d.out + o];
      }
    }
    if (li > 0)
      for (std::size_t j = 0; j < d.in; ++j) grad_in[j] *= 1 - acts[li][j] * acts[li][j];
    grad_out = std::move(grad_in);
  }
}

void Mlp::adam_step(float lr, float grad_scale) {
  ++adam_t_;
  const float b1 = 0.9f, b2 = 0.999f;
  const float c1 = 1 - std::pow(b1, adam_t_), c2 = 1 - std::pow(b2, adam_t_);
  auto update = [&](std::vector<float>& w, std::vector<float>& g, std::vector<float>& m, std::vector<float>& v) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      const float gg = g[k] * grad_scale;
      m[k] = b1 * m[k] + (1 - b1) * gg;
      v[k] = b2 * v[k] + (1 - b2) * gg * gg;
      w[k] -= lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + 1e-8f);
      g[k] = 0;
    }
  };
  for (auto& d : layers_) {
    update(d.wt, d.g_wt, d.m_wt, d.v_wt);
    update(d.b, d.g_b, d.m_b, d.v_b);
  }
}

GaussianPolicy GaussianPolicy::create(std::mt19937_64& rng, float initial_log_std) {
  GaussianPolicy p;
  p.mean = Mlp(kPolicyLayers, rng, 0.1f);
  p.log_std.assign(kActionDim, initial_log_std);
  return p;
}

Action GaussianPolicy::act_mean(const Observation& obs) const {
  thread_local std::vector<std::vector<float>> acts;
  mean.forward(obs.data(), acts);
  Action a{};
  std::copy_n(acts.back().begin(), kActionDim, a.begin());
  return a;
}

namespace {

void put_f32(Bytes& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  put_u32_le(out, u);
}

float get_f32(const std::uint8_t* p) {
  std::uint32_t u = get_u32_le(p);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

}  // namespace

Bytes encode_checkpoint(const GaussianPolicy& policy) {
  Bytes out{'G', 'W', 'P', 'L'};
  put_u32_le(out, kCheckpointVersion);
  put_u32_le(out, static_cast<std::uint32_t>(policy.parameter_count()));
  for (auto& d : policy.mean.layers()) {
    for (std::size_t o = 0; o < d.out; ++o)
      for (std::size_t j = 0; j < d.in; ++j) put_f32(out, d.wt[j * d.out + o]);
    for (float b : d.b) put_f32(out, b);
  }
  for (float s : policy.log_std) put_f32(out, s);
  return out;
}

Result<GaussianPolicy, CheckpointError> decode_checkpoint(ByteView bytes) {
  if (bytes.size() < 12) return unexpected(CheckpointError{CheckpointErrc::Truncated, "header shorter than 12 bytes"});
  if (std::memcmp(bytes.data(), "GWPL", 4) != 0) return unexpected(CheckpointError{CheckpointErrc::BadMagic, "magic"});
  const auto version = get_u32_le(bytes.data() + 4);
  if (version != kCheckpointVersion)
    return unexpected(CheckpointError{CheckpointErrc::UnsupportedVersion, "version " + std::to_string(version)});
  std::mt19937_64 unused(0);
  GaussianPolicy p = GaussianPolicy::create(unused, 0.f);
  const auto count = get_u32_le(bytes.data() + 8);
  if (count != p.parameter_count())
    return unexpected(CheckpointError{CheckpointErrc::ParameterCountMismatch,
                                      "expected " + std::to_string(p.parameter_count()) + ", got " +
                                          std::to_string(count)});
  if (bytes.size() != 12 + 4 * static_cast<std::size_t>(count))
    return unexpected(CheckpointError{CheckpointErrc::Truncated, "payload size does not match parameter count"});
  const std::uint8_t* cur = bytes.data() + 12;
  for (auto& d : p.mean.layers()) {
    for (std::size_t o = 0; o < d.out; ++o)
      for (std::size_t j = 0; j < d.in; ++j, cur += 4) d.wt[j * d.out + o] = get_f32(cur);
    for (float& b : d.b) {
      b = get_f32(cur);
      cur += 4;
    }
  }
  for (float& s : p.log_std) {
    s = get_f32(cur);
    cur += 4;
  }
  return p;
}

Result<void, CheckpointError> save_checkpoint(const GaussianPolicy& policy, const std::string& path) {
  auto bytes = encode_checkpoint(policy);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return unexpected(CheckpointError{CheckpointErrc::Io, "cannot open " + path});
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) return unexpected(CheckpointError{CheckpointErrc::Io, "write failed: " + path});
  return {};
}

Result<GaussianPolicy, CheckpointError> load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return unexpected(CheckpointError{CheckpointErrc::Io, "cannot open " + path});
  Bytes bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace edgeplay::sim
