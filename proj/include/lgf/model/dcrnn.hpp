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

#ifndef LGF_MODEL_DCRNN_HPP_
#define LGF_MODEL_DCRNN_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/model/diffusion_conv.hpp"

namespace lgf {

/// Diffusion-convolutional GRU cell plus the scalar output projection used
/// by the autoregressive decoder.
struct DcrnnParams {
  DiffusionWeights reset, cand, update;
  Tensor b_r, b_c, b_u;  // [h]
  Tensor out_w;          // [h, 1]
  Tensor out_b;          // [1]
  int hidden = 32;
  int window = 20;
  int hops = 2;

  static DcrnnParams init(int window, int hidden, RngStream& rng, int hops = 2) {
    DcrnnParams p;
    p.hidden = hidden;
    p.window = window;
    p.hops = hops;
    const int gate_in = 1 + hidden;
    p.reset = DiffusionWeights::init(gate_in, hidden, hops, rng);
    p.cand = DiffusionWeights::init(gate_in, hidden, hops, rng);
    p.update = DiffusionWeights::init(gate_in, hidden, hops, rng);
    p.b_r = Tensor::zeros({hidden});
    p.b_c = Tensor::zeros({hidden});
    p.b_u = Tensor::zeros({hidden});
    p.out_w = glorot({hidden, 1}, rng);
    p.out_b = Tensor::zeros({1});
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    reset.register_params(ps, "r");
    cand.register_params(ps, "c");
    update.register_params(ps, "u");
    ps.add("b_r", b_r);
    ps.add("b_c", b_c);
    ps.add("b_u", b_u);
    ps.add("out_w", out_w);
    ps.add("out_b", out_b);
    return ps;
  }
};

/// One recurrent step. z_t: [B, N, 1], h_prev: [B, N, h].
inline Tensor dcrnn_step(const Tensor& z_t, const Tensor& h_prev, const Tensor& A,
                         const DcrnnParams& p) {
  check_shape(z_t.ndim() == h_prev.ndim() && h_prev.dim(h_prev.ndim() - 1) == p.hidden,
              "dcrnn_step: shape mismatch between input, state and hidden size");
  Tensor zh = concat(z_t, h_prev);
  Tensor r = sigmoid(add(graph_diffusion_conv(zh, A, p.reset, p.hops), p.b_r));
  Tensor u = sigmoid(add(graph_diffusion_conv(zh, A, p.update, p.hops), p.b_u));
  Tensor zrh = concat(z_t, mul(r, h_prev));
  Tensor c = tanh_op(add(graph_diffusion_conv(zrh, A, p.cand, p.hops), p.b_c));
  return add(mul(u, h_prev), sub(c, mul(u, c)));
}

/// Encoder-decoder rollout: the encoder consumes the window step by step,
/// the decoder feeds its own projected predictions back for `horizon` steps.
/// window: [N, w] or [B, N, w] -> [N, horizon] or [B, N, horizon].
inline Tensor dcrnn_forecast(const Tensor& window, const Tensor& A, const DcrnnParams& p,
                             int horizon = 12) {
  const bool batched = window.ndim() == 3;
  const int w = window.dim(batched ? 2 : 1);
  if (w != p.window) {
    throw std::invalid_argument("dcrnn_forecast: window length " + std::to_string(w) +
                                " does not match configured length " + std::to_string(p.window));
  }
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  Tensor x3 = batched ? window : reshape(window, {1, n, w});
  Tensor h = Tensor::zeros({b, n, p.hidden});
  for (int t = 0; t < w; ++t) h = dcrnn_step(slice_last(x3, t, 1), h, A, p);
  Tensor x = slice_last(x3, w - 1, 1);
  std::vector<Tensor> preds;
  for (int s = 0; s < horizon; ++s) {
    h = dcrnn_step(x, h, A, p);
    Tensor y = add(matmul(reshape(h, {b * n, p.hidden}), p.out_w), p.out_b);
    x = reshape(y, {b, n, 1});
    preds.push_back(x);
  }
  Tensor out = concat(preds);
  return batched ? out : reshape(out, {n, horizon});
}

}  // namespace lgf

#endif  // LGF_MODEL_DCRNN_HPP_
