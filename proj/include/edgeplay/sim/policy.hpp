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
#include <random>
#include <string>
#include <vector>

#include "edgeplay/common/bytes.hpp"
#include "edgeplay/common/result.hpp"
#include "edgeplay/sim/biped.hpp"

namespace edgeplay::sim {

/// Dense layer. Weights are stored transposed (wt[j * out + o]) so inference
/// runs on the matvec kernel; gradients and Adam moments share the layout.
struct Dense {
  std::size_t in = 0, out = 0;
  std::vector<float> wt, b;
  std::vector<float> g_wt, g_b;
  std::vector<float> m_wt, v_wt, m_b, v_b;
};

/// tanh hidden layers, linear output.
class Mlp {
 public:
  Mlp() = default;
  Mlp(const std::vector<std::size_t>& sizes, std::mt19937_64& rng, float last_layer_scale);

  /// Forward pass keeping every layer's activation for backward().
  void forward(const float* x, std::vector<std::vector<float>>& acts) const;
  /// Accumulates parameter gradients for d(loss)/d(output) = grad_out.
  void backward(const std::vector<std::vector<float>>& acts, std::vector<float> grad_out);
  void adam_step(float lr, float grad_scale);

  const std::vector<Dense>& layers() const { return layers_; }
  std::vector<Dense>& layers() { return layers_; }
  std::size_t input_size() const { return layers_.empty() ? 0 : layers_.front().in; }
  std::size_t output_size() const { return layers_.empty() ? 0 : layers_.back().out; }
  std::size_t parameter_count() const;

 private:
  std::vector<Dense> layers_;
  int adam_t_ = 0;
};

/// Diagonal Gaussian policy over the biped's actions.
struct GaussianPolicy {
  Mlp mean;
  std::vector<float> log_std;

  static GaussianPolicy create(std::mt19937_64& rng, float initial_log_std);
  Action act_mean(const Observation& obs) const;
  std::size_t parameter_count() const { return mean.parameter_count() + log_std.size(); }
};

inline const std::vector<std::size_t> kPolicyLayers{kObsDim, 32, 32, kActionDim};
inline const std::vector<std::size_t> kValueLayers{kObsDim, 32, 32, 1};

enum class CheckpointErrc { BadMagic, UnsupportedVersion, ParameterCountMismatch, Truncated, Io };

struct CheckpointError {
  CheckpointErrc code;
  std::string detail;
};

/// Policy checkpoint: "GWPL", u32 version, u32 parameter count, then the
/// parameters as little-endian float32. Header integers are little-endian
/// too. Parameter order: per layer, weights row-major [out][in], then bias;
/// then log_std.
inline constexpr std::uint32_t kCheckpointVersion = 1;

Bytes encode_checkpoint(const GaussianPolicy& policy);
Result<GaussianPolicy, CheckpointError> decode_checkpoint(ByteView bytes);
Result<void, CheckpointError> save_checkpoint(const GaussianPolicy& policy, const std::string& path);
Result<GaussianPolicy, CheckpointError> load_checkpoint(const std::string& path);

}  // namespace edgeplay::sim
