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

#ifndef LGF_CORE_GUMBEL_HPP_
#define LGF_CORE_GUMBEL_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lgf/core/ops.hpp"
#include "lgf/core/rng.hpp"
#include "lgf/core/tape.hpp"
#include "lgf/core/tensor.hpp"

namespace lgf {

/// Forward: one-hot of the per-row argmax (ties -> lowest index).
/// Backward: identity to the soft input (straight-through estimator).
inline Tensor straight_through_onehot(const Tensor& soft) {
  const int d = soft.dim(soft.ndim() - 1);
  const int rows = soft.size() / d;
  Tensor out = Tensor::zeros(soft.shape());
  {
    auto& o = out.mutable_data();
    for (int r = 0; r < rows; ++r) {
      const double* s = soft.data().data() + static_cast<size_t>(r) * d;
      int best = 0;
      for (int i = 1; i < d; ++i) {
        if (s[i] > s[best]) best = i;
      }
      o[static_cast<size_t>(r) * d + best] = 1.0;
    }
  }
  Tape* tp = tape_of({&soft});
  const int sn = soft.on_tape() ? soft.node : -1;
  detail::attach(out, tp, "straight_through_onehot", [sn](const std::vector<double>& g, Tape& t) {
    if (sn >= 0) t.accumulate(sn, g);
  });
  return out;
}

/// Gumbel-softmax over the last axis. Soft mode returns
/// softmax((logits + G)/temperature); hard mode passes the soft sample
/// through straight_through_onehot.
inline Tensor gumbel_softmax(const Tensor& logits, double temperature, bool hard, RngStream& rng) {
  if (temperature <= 0.0) {
    throw std::invalid_argument("gumbel_softmax: temperature must be positive");
  }
  if (!logits.all_finite()) {
    throw std::invalid_argument("gumbel_softmax: logits must be finite");
  }
  Tensor noise = Tensor::zeros(logits.shape());
  {
    auto& nd = noise.mutable_data();
    for (double& v : nd) v = rng.gumbel();
  }
  Tensor soft = softmax(scale(add(logits, noise), 1.0 / temperature));
  return hard ? straight_through_onehot(soft) : soft;
}

/// Elementwise straight-through Gumbel-Bernoulli sample from probabilities.
/// Forward values are exactly 0/1; the backward pass uses the derivative of
/// the underlying soft sample sigma((logit(theta) + L)/temperature) with
/// logistic noise L. Entries at exactly 0 or 1 are deterministic and carry
/// no gradient.
inline Tensor gumbel_bernoulli(const Tensor& theta, double temperature, RngStream& rng) {
  if (temperature <= 0.0) {
    throw std::invalid_argument("gumbel_bernoulli: temperature must be positive");
  }
  const int n = theta.size();
  for (double v : theta.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("gumbel_bernoulli: probabilities must lie in [0,1]");
    }
  }
  std::vector<double> soft(static_cast<size_t>(n));
  Tensor out = Tensor::zeros(theta.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) {
      const double p = theta.data()[static_cast<size_t>(i)];
      if (p <= 0.0) {
        soft[static_cast<size_t>(i)] = 0.0;
        o[static_cast<size_t>(i)] = 0.0;
        continue;
      }
      if (p >= 1.0) {
        soft[static_cast<size_t>(i)] = 1.0;
        o[static_cast<size_t>(i)] = 1.0;
        continue;
      }
      const double z = std::log(p) - std::log1p(-p);
      const double noise = rng.gumbel() - rng.gumbel();  // logistic
      const double a = (z + noise) / temperature;
      const double s = a >= 0 ? 1.0 / (1.0 + std::exp(-a)) : std::exp(a) / (1.0 + std::exp(a));
      soft[static_cast<size_t>(i)] = s;
      o[static_cast<size_t>(i)] = s > 0.5 ? 1.0 : 0.0;
    }
  }
  Tape* tp = tape_of({&theta});
  const int tn = theta.on_tape() ? theta.node : -1;
  detail::attach(out, tp, "gumbel_bernoulli",
                 [theta, tn, n, soft, temperature](const std::vector<double>& g, Tape& t) {
    if (tn >= 0) {
      std::vector<double> gt(static_cast<size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        const double p = theta.data()[static_cast<size_t>(i)];
        if (p <= 0.0 || p >= 1.0) continue;
        const double s = soft[static_cast<size_t>(i)];
        // ds/dp = s(1-s)/temperature * dz/dp, with z = logit(p).
        gt[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * s * (1.0 - s) / (temperature * p * (1.0 - p));
      }
      t.accumulate(tn, gt);
    }
  });
  return out;
}

}  // namespace lgf

#endif  // LGF_CORE_GUMBEL_HPP_
