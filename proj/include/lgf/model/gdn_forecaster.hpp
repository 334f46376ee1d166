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

#ifndef LGF_MODEL_GDN_FORECASTER_HPP_
#define LGF_MODEL_GDN_FORECASTER_HPP_

#include <stdexcept>
#include <string>

#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/rng.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

/// Attention forecaster sharing its node embeddings with the cosine-kNN
/// graph learner. The output head is applied per node with shared weights,
/// mapping the gated representation to all horizon steps at once.
struct GdnForecasterParams {
  Tensor embed;   // [N, d], shared with the graph learner
  Tensor proj_w;  // [w, d]
  Tensor attn;    // [4d]
  Tensor mlp_w1;  // [d, hidden]
  Tensor mlp_b1;  // [hidden]
  Tensor mlp_w2;  // [hidden, horizon]
  Tensor mlp_b2;  // [horizon]
  int window = 20;
  int horizon = 12;

  static GdnForecasterParams init(int n, int window, int d, int horizon, RngStream& rng,
                                  int mlp_hidden = 64) {
    GdnForecasterParams p;
    p.window = window;
    p.horizon = horizon;
    p.embed = glorot({n, d}, rng);
    p.proj_w = glorot({window, d}, rng);
    p.attn = glorot({4 * d}, rng);
    p.mlp_w1 = glorot({d, mlp_hidden}, rng);
    p.mlp_b1 = Tensor::zeros({mlp_hidden});
    p.mlp_w2 = glorot({mlp_hidden, horizon}, rng);
    p.mlp_b2 = Tensor::zeros({horizon});
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    ps.add("embed", embed);
    ps.add("proj_w", proj_w);
    ps.add("attn", attn);
    ps.add("mlp_w1", mlp_w1);
    ps.add("mlp_b1", mlp_b1);
    ps.add("mlp_w2", mlp_w2);
    ps.add("mlp_b2", mlp_b2);
    return ps;
  }
};

/// Attention weights alpha: [B, N, N], each row i a distribution over the
/// in-neighborhood of i plus i itself (other entries exactly zero).
inline Tensor gdn_attention(const Tensor& window, const Tensor& A, const GdnForecasterParams& p) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  if (w != p.window) {
    throw std::invalid_argument("gdn_attention: window length " + std::to_string(w) +
                                " does not match configured length " + std::to_string(p.window));
  }
  const int d = p.proj_w.dim(1);
  Tensor x3 = batched ? window : reshape(window, {1, n, w});
  Tensor wz = reshape(matmul(reshape(x3, {b * n, w}), p.proj_w), {b, n, d});
  Tensor v = expand_batch(p.embed, b);
  Tensor g = concat(v, wz);  // [B, N, 2d]
  Tensor a1 = reshape(slice_last(p.attn, 0, 2 * d), {2 * d, 1});
  Tensor a2 = reshape(slice_last(p.attn, 2 * d, 2 * d), {2 * d, 1});
  Tensor u = reshape(matmul(reshape(g, {b * n, 2 * d}), a1), {b, n, 1});
  Tensor t = reshape(matmul(reshape(g, {b * n, 2 * d}), a2), {b, 1, n});
  Tensor logits = leaky_relu(add(bmm(u, Tensor::full({b, 1, n}, 1.0)),
                                 bmm(Tensor::full({b, n, 1}, 1.0), t)));
  // Additive mask: pair (i, j) allowed when j -> i exists or j == i.
  Tensor mask = Tensor::zeros({n, n});
  {
    auto& m = mask.mutable_data();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && A(j, i) == 0.0) m[static_cast<size_t>(i) * n + j] = -1e30;
      }
    }
  }
  return softmax(add(logits, mask));
}

/// h_i = ReLU(sum_j alpha_ij W z_j); forecast_i = MLP(v_i * h_i).
/// window: [N, w] or [B, N, w] -> [N, horizon] or [B, N, horizon].
inline Tensor gdn_forecast(const Tensor& window, const Tensor& A, const GdnForecasterParams& p) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  const int d = p.proj_w.dim(1);
  Tensor alpha = gdn_attention(window, A, p);
  Tensor x3 = batched ? window : reshape(window, {1, n, w});
  Tensor wz = reshape(matmul(reshape(x3, {b * n, w}), p.proj_w), {b, n, d});
  Tensor h = relu(bmm(alpha, wz));
  Tensor gated = mul(expand_batch(p.embed, b), h);
  Tensor hidden = relu(add(matmul(reshape(gated, {b * n, d}), p.mlp_w1), p.mlp_b1));
  Tensor out = reshape(add(matmul(hidden, p.mlp_w2), p.mlp_b2), {b, n, p.horizon});
  return batched ? out : reshape(out, {n, p.horizon});
}

}  // namespace lgf

#endif  // LGF_MODEL_GDN_FORECASTER_HPP_
