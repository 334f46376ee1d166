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

#ifndef LGF_MODEL_NRI_DECODER_HPP_
#define LGF_MODEL_NRI_DECODER_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/rng.hpp"
#include "lgf/graph/learners.hpp"

namespace lgf {

/// MLP decoder: one message network per edge type (type 0 sends nothing),
/// an output network mapping [state || aggregated messages] to an additive
/// delta, rolled out autoregressively.
struct NriDecoderParams {
  // msg_*[e] parameterize the network of edge type e+1; type 0 is silent.
  std::vector<Tensor> msg_w1, msg_b1, msg_w2, msg_b2;  // [2,h],[h],[h,h],[h]
  Tensor out_w1, out_b1, out_w2, out_b2;               // [1+h,h],[h],[h,1],[1]
  int edge_types = 2;
  int hidden = 16;

  static NriDecoderParams init(int edge_types, int hidden, RngStream& rng) {
    if (edge_types < 2) throw std::invalid_argument("NriDecoderParams: need at least 2 edge types");
    NriDecoderParams p;
    p.edge_types = edge_types;
    p.hidden = hidden;
    for (int e = 1; e < edge_types; ++e) {
      p.msg_w1.push_back(glorot({2, hidden}, rng));
      p.msg_b1.push_back(Tensor::zeros({hidden}));
      p.msg_w2.push_back(glorot({hidden, hidden}, rng));
      p.msg_b2.push_back(Tensor::zeros({hidden}));
    }
    p.out_w1 = glorot({1 + hidden, hidden}, rng);
    p.out_b1 = Tensor::zeros({hidden});
    p.out_w2 = glorot({hidden, 1}, rng);
    p.out_b2 = Tensor::zeros({1});
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    for (size_t e = 0; e < msg_w1.size(); ++e) {
      const std::string pre = "msg" + std::to_string(e + 1) + "_";
      ps.add(pre + "w1", msg_w1[e]);
      ps.add(pre + "b1", msg_b1[e]);
      ps.add(pre + "w2", msg_w2[e]);
      ps.add(pre + "b2", msg_b2[e]);
    }
    ps.add("out_w1", out_w1);
    ps.add("out_b1", out_b1);
    ps.add("out_w2", out_w2);
    ps.add("out_b2", out_b2);
    return ps;
  }
};

/// window: [N, w] or [B, N, w]; edge_type_onehots: [N, N, E] or [B, N, N, E]
/// with each ordered pair one-hot over the E types. Returns [N, horizon] or
/// [B, N, horizon]; predictions are cumulative deltas from the last value.
inline Tensor nri_decode(const Tensor& window, const Tensor& edge_type_onehots,
                         const NriDecoderParams& p, int horizon = 12) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  const int E = p.edge_types;
  Tensor oh = edge_type_onehots;
  if (oh.ndim() == 3) oh = expand_batch(oh, b);
  check_shape(oh.ndim() == 4 && oh.dim(0) == b && oh.dim(1) == n && oh.dim(2) == n &&
                  oh.dim(3) == E,
              "nri_decode: edge type tensor has shape " + shape_str(edge_type_onehots.shape()));
  {
    const auto& v = oh.data();
    const int pairs = b * n * n;
    for (int r = 0; r < pairs; ++r) {
      double s = 0.0;
      for (int e = 0; e < E; ++e) s += v[static_cast<size_t>(r) * E + e];
      if (std::fabs(s - 1.0) > 1e-9) {
        throw std::invalid_argument("nri_decode: edge type row " + std::to_string(r) +
                                    " sums to " + std::to_string(s) + ", expected 1");
      }
    }
  }
  Tensor oh3 = reshape(oh, {b, n * n, E});
  Tensor S = incoming_pair_sum_matrix(n);
  const int h = p.hidden;
  Tensor x = slice_last(batched ? window : reshape(window, {1, n, w}), w - 1, 1);  // [B, N, 1]
  std::vector<Tensor> preds;
  for (int s = 0; s < horizon; ++s) {
    Tensor pairs = reshape(concat(pair_source(x), pair_target(x)), {b * n * n, 2});
    Tensor msg;
    for (int e = 1; e < E; ++e) {
      const size_t ei = static_cast<size_t>(e - 1);
      Tensor m = add(matmul(relu(add(matmul(pairs, p.msg_w1[ei]), p.msg_b1[ei])), p.msg_w2[ei]),
                     p.msg_b2[ei]);
      Tensor weight = reshape(slice_last(oh3, e, 1), {b * n * n});
      Tensor weighted = scale_rows(m, weight);
      msg = e == 1 ? weighted : add(msg, weighted);
    }
    Tensor agg = left_matmul(S, reshape(msg, {b, n * n, h}));  // [B, N, h]
    Tensor inp = reshape(concat(x, agg), {b * n, 1 + h});
    Tensor delta = add(matmul(relu(add(matmul(inp, p.out_w1), p.out_b1)), p.out_w2), p.out_b2);
    x = add(x, reshape(delta, {b, n, 1}));
    preds.push_back(x);
  }
  Tensor out = concat(preds);
  return batched ? out : reshape(out, {n, horizon});
}

}  // namespace lgf

#endif  // LGF_MODEL_NRI_DECODER_HPP_
