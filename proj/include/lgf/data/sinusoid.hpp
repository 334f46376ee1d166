// Copyright 2026 The LGF Authors.
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

#ifndef LGF_DATA_SINUSOID_HPP_
#define LGF_DATA_SINUSOID_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lgf/core/rng.hpp"

namespace lgf {

struct SinusoidParams {
  double frequency = 0.05;
  double amplitude = 1.0;
  double hshift = 0.0;
  double vshift = 0.0;
};

/// Parameter ranges: f ~ U(0.01, 0.1), a ~ U(0.5, 2), horizontal shift
/// ~ U(0, 2 pi), vertical shift ~ U(-1, 1).
inline SinusoidParams sample_sinusoid_params(RngStream& rng) {
  SinusoidParams p;
  p.frequency = rng.uniform(0.01, 0.1);
  p.amplitude = rng.uniform(0.5, 2.0);
  p.hshift = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.vshift = rng.uniform(-1.0, 1.0);
  return p;
}

/// s_t = amplitude * sin(frequency * t + hshift) + vshift, t = 0..T-1.
inline std::vector<double> sample_sinusoid(const SinusoidParams& p, int t_len) {
  if (t_len < 1) throw std::invalid_argument("sample_sinusoid: T must be at least 1");
  std::vector<double> s(static_cast<size_t>(t_len));
  for (int t = 0; t < t_len; ++t) {
    s[static_cast<size_t>(t)] = p.amplitude * std::sin(p.frequency * t + p.hshift) + p.vshift;
  }
  return s;
}

}  // namespace lgf

#endif  // LGF_DATA_SINUSOID_HPP_
