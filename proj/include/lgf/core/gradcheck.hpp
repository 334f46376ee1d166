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

#ifndef LGF_CORE_GRADCHECK_HPP_
#define LGF_CORE_GRADCHECK_HPP_

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lgf/core/tape.hpp"
#include "lgf/core/tensor.hpp"

namespace lgf {

/// Scalar function of a parameter list. The function must consume exactly the
/// tensors it is handed (watched or not) and be deterministic: any sampling
/// inside must use frozen noise.
using ScalarFn = std::function<Tensor(std::vector<Tensor>&)>;

/// Compares reverse-mode gradients against central finite differences.
/// Returns max over parameter entries of
/// |analytic - central| / max(1, |central|).
inline double finite_difference_check(const ScalarFn& fn, std::vector<Tensor> params, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) {
    throw std::invalid_argument("finite_difference_check: eps must lie in [1e-7, 1e-3]");
  }
  auto eval = [&fn](std::vector<Tensor>& ps) {
    Tensor loss = fn(ps);
    if (loss.size() != 1) {
      throw std::invalid_argument("finite_difference_check: fn must return a scalar");
    }
    return loss;
  };

  // Determinism probe: two identical evaluations must agree bit-for-bit.
  {
    std::vector<Tensor> plain;
    for (const Tensor& p : params) plain.push_back(p.detach());
    const double v1 = eval(plain).value();
    plain.clear();
    for (const Tensor& p : params) plain.push_back(p.detach());
    const double v2 = eval(plain).value();
    if (v1 != v2) {
      throw std::runtime_error("finite_difference_check: fn is not deterministic");
    }
  }

  // Analytic gradients.
  Tape tape;
  std::vector<Tensor> watched;
  for (Tensor& p : params) {
    Tensor w(p.shape(), p.data());
    tape.watch(w);
    watched.push_back(w);
  }
  Tensor loss = eval(watched);
  if (!loss.on_tape() || loss.tape != &tape) {
    throw std::invalid_argument("finite_difference_check: loss does not depend on watched parameters");
  }
  tape.backward(loss);
  std::vector<Tensor> analytic;
  for (const Tensor& w : watched) analytic.push_back(tape.grad(w));

  // Central differences.
  double max_err = 0.0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    for (int j = 0; j < params[pi].size(); ++j) {
      auto perturbed = [&](double delta) {
        std::vector<Tensor> ps;
        for (const Tensor& p : params) ps.push_back(Tensor(p.shape(), p.data()));
        ps[pi].mutable_data()[static_cast<size_t>(j)] += delta;
        return eval(ps).value();
      };
      const double central = (perturbed(eps) - perturbed(-eps)) / (2.0 * eps);
      const double a = analytic[pi].data()[static_cast<size_t>(j)];
      const double err = std::fabs(a - central) / std::max(1.0, std::fabs(central));
      max_err = std::max(max_err, err);
    }
  }
  return max_err;
}

}  // namespace lgf

#endif  // LGF_CORE_GRADCHECK_HPP_
