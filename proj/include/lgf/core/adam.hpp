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

#ifndef LGF_CORE_ADAM_HPP_
#define LGF_CORE_ADAM_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lgf/core/params.hpp"
#include "lgf/core/tensor.hpp"

namespace lgf {

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int step_count = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

/// One Adam update with bias correction over a parameter set.
inline void adam_step(ParamSet& params, const std::vector<Tensor>& grads, AdamState& state) {
  if (grads.size() != params.size()) {
    throw std::invalid_argument("adam_step: gradient count does not match parameter count");
  }
  if (state.first_moment.empty()) {
    for (size_t i = 0; i < params.size(); ++i) {
      state.first_moment.push_back(Tensor::zeros(params.tensor(i).shape()));
      state.second_moment.push_back(Tensor::zeros(params.tensor(i).shape()));
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw std::invalid_argument("adam_step: optimizer state does not match parameter count");
  }
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, state.step_count);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step_count);
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& p = params.tensor(i);
    const Tensor& g = grads[i];
    if (g.shape() != p.shape() || state.first_moment[i].shape() != p.shape()) {
      throw std::invalid_argument("adam_step: shape mismatch for parameter " + params.name(i));
    }
    auto& pv = p.mutable_data();
    auto& m = state.first_moment[i].mutable_data();
    auto& v = state.second_moment[i].mutable_data();
    for (size_t j = 0; j < pv.size(); ++j) {
      const double gj = g.data()[j];
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * gj;
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * gj * gj;
      pv[j] -= state.lr * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + state.eps);
    }
  }
}

}  // namespace lgf

#endif  // LGF_CORE_ADAM_HPP_
