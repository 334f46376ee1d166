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

#ifndef LGF_CORE_RNG_HPP_
#define LGF_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace lgf {

/// Splittable counter-based random stream (SplitMix64 mixing).
/// Every run owns one root stream seeded from its config; components draw
/// from child streams obtained via split(), so adding draws in one component
/// never perturbs another.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kKeyTweak)) {}

  /// Child stream identified by `index`; independent of this stream's counter.
  RngStream split(std::uint64_t index) const {
    return RngStream(key_, mix(key_ ^ mix(index + kSplitTweak)));
  }

  std::uint64_t next_u64() { return mix(key_ ^ (kGamma * ++counter_)); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {0, ..., n-1}.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (fresh pair each call, no cached spare).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Standard Gumbel(0, 1).
  double gumbel() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(-std::log(u));
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  RngStream(std::uint64_t key_base, std::uint64_t salt)
      : key_(mix(key_base ^ salt)) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kKeyTweak = 0xA5A5A5A55A5A5A5AULL;
  static constexpr std::uint64_t kSplitTweak = 0xD6E8FEB86659FD93ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lgf

#endif  // LGF_CORE_RNG_HPP_
