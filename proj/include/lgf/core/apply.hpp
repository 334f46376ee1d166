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

#ifndef LGF_CORE_APPLY_HPP_
#define LGF_CORE_APPLY_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/ops.hpp"

namespace lgf {

/// Numeric attributes for the generic dispatcher (stride, dilation, axis...).
using OpAttrs = std::map<std::string, double>;

namespace detail {
inline double attr(const OpAttrs& a, const std::string& key, double fallback) {
  auto it = a.find(key);
  return it == a.end() ? fallback : it->second;
}
}  // namespace detail

/// Single entry point over the op catalog, dispatched by name. Typed
/// wrappers in ops.hpp are what model code uses; this exists so catalog-wide
/// sweeps (tests, gradient checks) can iterate ops uniformly.
inline Tensor forward(const std::string& op_kind, const std::vector<Tensor>& inputs,
                      const OpAttrs& attrs = {}) {
  auto need = [&](size_t n) {
    if (inputs.size() != n) {
      throw std::invalid_argument("op " + op_kind + " expects " + std::to_string(n) +
                                  " inputs, got " + std::to_string(inputs.size()));
    }
  };
  if (op_kind == "matmul") { need(2); return matmul(inputs[0], inputs[1]); }
  if (op_kind == "bmm") { need(2); return bmm(inputs[0], inputs[1]); }
  if (op_kind == "left_matmul") { need(2); return left_matmul(inputs[0], inputs[1]); }
  if (op_kind == "add") { need(2); return add(inputs[0], inputs[1]); }
  if (op_kind == "sub") { need(2); return sub(inputs[0], inputs[1]); }
  if (op_kind == "mul") { need(2); return mul(inputs[0], inputs[1]); }
  if (op_kind == "scale") { need(1); return scale(inputs[0], detail::attr(attrs, "factor", 1.0)); }
  if (op_kind == "concat") { return concat(inputs); }
  if (op_kind == "conv1d") {
    need(2);
    return conv1d(inputs[0], inputs[1], static_cast<int>(detail::attr(attrs, "stride", 1)),
                  static_cast<int>(detail::attr(attrs, "dilation", 1)));
  }
  if (op_kind == "sigmoid") { need(1); return sigmoid(inputs[0]); }
  if (op_kind == "tanh") { need(1); return tanh_op(inputs[0]); }
  if (op_kind == "relu") { need(1); return relu(inputs[0]); }
  if (op_kind == "leaky_relu") { need(1); return leaky_relu(inputs[0], detail::attr(attrs, "slope", 0.2)); }
  if (op_kind == "softmax") { need(1); return softmax(inputs[0]); }
  if (op_kind == "reduce_sum") { need(1); return reduce_sum(inputs[0], static_cast<int>(detail::attr(attrs, "axis", 0))); }
  if (op_kind == "reduce_mean") { need(1); return reduce_mean(inputs[0], static_cast<int>(detail::attr(attrs, "axis", 0))); }
  if (op_kind == "abs") { need(1); return abs_op(inputs[0]); }
  if (op_kind == "transpose") { need(1); return transpose(inputs[0]); }
  if (op_kind == "row_normalize") { need(1); return row_normalize(inputs[0]); }
  throw std::invalid_argument("unknown op kind: " + op_kind);
}

}  // namespace lgf

#endif  // LGF_CORE_APPLY_HPP_
