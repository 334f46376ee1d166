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

#ifndef LGF_MODEL_LSTM_HPP_
#define LGF_MODEL_LSTM_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/rng.hpp"

namespace lgf {

struct LstmCellParams {
  Tensor w_x;  // [in, 4h], gate order i|f|o|g
  Tensor w_h;  // [h, 4h]
  Tensor b;    // [4h]
  int input = 1;
  int hidden = 64;

  static LstmCellParams init(int input, int hidden, RngStream& rng) {
    LstmCellParams p;
    p.input = input;
    p.hidden = hidden;
    p.w_x = glorot({input, 4 * hidden}, rng);
    p.w_h = glorot({hidden, 4 * hidden}, rng);
    p.b = Tensor::zeros({4 * hidden});
    return p;
  }

  void register_params(ParamSet& ps, const std::string& prefix) {
    ps.add(prefix + "w_x", w_x);
    ps.add(prefix + "w_h", w_h);
    ps.add(prefix + "b", b);
  }
};

struct LstmState {
  Tensor h;  // [B, hidden]
  Tensor c;  // [B, hidden]
};

inline LstmState lstm_step(const Tensor& x, const LstmState& s, const LstmCellParams& p) {
  const int h = p.hidden;
  Tensor gates = add(add(matmul(x, p.w_x), matmul(s.h, p.w_h)), p.b);
  Tensor i = sigmoid(slice_last(gates, 0, h));
  Tensor f = sigmoid(slice_last(gates, h, h));
  Tensor o = sigmoid(slice_last(gates, 2 * h, h));
  Tensor g = tanh_op(slice_last(gates, 3 * h, h));
  Tensor c = add(mul(f, s.c), mul(i, g));
  return LstmState{mul(o, tanh_op(c)), c};
}

/// Joint forecaster: one cell whose input is the full N-vector per step,
/// linear head back to N outputs, autoregressive rollout.
struct JointLstmParams {
  LstmCellParams cell;
  Tensor head_w;  // [hidden, N]
  Tensor head_b;  // [N]
  int nodes = 0;
  int window = 20;

  static JointLstmParams init(int nodes, int window, int hidden, RngStream& rng) {
    JointLstmParams p;
    p.nodes = nodes;
    p.window = window;
    p.cell = LstmCellParams::init(nodes, hidden, rng);
    p.head_w = glorot({hidden, nodes}, rng);
    p.head_b = Tensor::zeros({nodes});
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    cell.register_params(ps, "");
    ps.add("head_w", head_w);
    ps.add("head_b", head_b);
    return ps;
  }
};

inline Tensor lstm_forecast(const Tensor& window, const JointLstmParams& p, int horizon = 12) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  if (n != p.nodes || w != p.window) {
    throw std::invalid_argument("lstm_forecast: window [" + std::to_string(n) + "," +
                                std::to_string(w) + "] does not match configured [" +
                                std::to_string(p.nodes) + "," + std::to_string(p.window) + "]");
  }
  Tensor x3 = batched ? window : reshape(window, {1, n, w});
  LstmState s{Tensor::zeros({b, p.cell.hidden}), Tensor::zeros({b, p.cell.hidden})};
  for (int t = 0; t < w; ++t) s = lstm_step(reshape(slice_last(x3, t, 1), {b, n}), s, p.cell);
  std::vector<Tensor> preds;
  Tensor x;
  for (int t = 0; t < horizon; ++t) {
    if (t > 0) s = lstm_step(x, s, p.cell);
    x = add(matmul(s.h, p.head_w), p.head_b);  // [B, N]
    preds.push_back(reshape(x, {b, n, 1}));
  }
  Tensor out = concat(preds);
  return batched ? out : reshape(out, {n, horizon});
}

/// Univariate variant: N fully independent cells and heads, one per series.
struct LstmUParams {
  std::vector<LstmCellParams> cells;
  std::vector<Tensor> head_w;  // each [hidden, 1]
  std::vector<Tensor> head_b;  // each [1]
  int window = 20;

  static LstmUParams init(int nodes, int window, int hidden, RngStream& rng) {
    LstmUParams p;
    p.window = window;
    for (int i = 0; i < nodes; ++i) {
      p.cells.push_back(LstmCellParams::init(1, hidden, rng));
      p.head_w.push_back(glorot({hidden, 1}, rng));
      p.head_b.push_back(Tensor::zeros({1}));
    }
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    for (size_t i = 0; i < cells.size(); ++i) {
      const std::string pre = "n" + std::to_string(i) + "_";
      cells[i].register_params(ps, pre);
      ps.add(pre + "head_w", head_w[i]);
      ps.add(pre + "head_b", head_b[i]);
    }
    return ps;
  }
};

inline Tensor lstm_u_forecast(const Tensor& window, const LstmUParams& p, int horizon = 12) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  if (n != static_cast<int>(p.cells.size()) || w != p.window) {
    throw std::invalid_argument("lstm_u_forecast: window [" + std::to_string(n) + "," +
                                std::to_string(w) + "] does not match configured [" +
                                std::to_string(static_cast<int>(p.cells.size())) + "," +
                                std::to_string(p.window) + "]");
  }
  Tensor flat = reshape(batched ? window : reshape(window, {1, n, w}), {b * n, w});
  std::vector<Tensor> node_preds;
  for (int i = 0; i < n; ++i) {
    std::vector<int> rows(static_cast<size_t>(b));
    for (int k = 0; k < b; ++k) rows[static_cast<size_t>(k)] = k * n + i;
    Tensor series = gather_rows(flat, rows);  // [B, w]
    const LstmCellParams& cell = p.cells[static_cast<size_t>(i)];
    LstmState s{Tensor::zeros({b, cell.hidden}), Tensor::zeros({b, cell.hidden})};
    for (int t = 0; t < w; ++t) s = lstm_step(slice_last(series, t, 1), s, cell);
    std::vector<Tensor> preds;
    Tensor x;
    for (int t = 0; t < horizon; ++t) {
      if (t > 0) s = lstm_step(x, s, cell);
      x = add(matmul(s.h, p.head_w[static_cast<size_t>(i)]), p.head_b[static_cast<size_t>(i)]);
      preds.push_back(x);
    }
    node_preds.push_back(reshape(concat(preds), {b, 1, horizon}));
  }
  // Last-axis concat of [B, 1, horizon] parts lays nodes out contiguously.
  Tensor out = reshape(concat(node_preds), {b, n, horizon});
  return batched ? out : reshape(out, {n, horizon});
}

}  // namespace lgf

#endif  // LGF_MODEL_LSTM_HPP_
