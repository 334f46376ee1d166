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

#ifndef LGF_MODEL_MTGNN_FORECASTER_HPP_
#define LGF_MODEL_MTGNN_FORECASTER_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/rng.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

inline constexpr std::array<int, 3> kInceptionKernels = {2, 3, 5};
inline constexpr int kMtgnnBlocks = 3;

/// Receptive field of the stacked inception convolutions (largest kernel).
inline int mtgnn_receptive_field() {
  int span = 1;
  for (int b = 0; b < kMtgnnBlocks; ++b) span += kInceptionKernels.back() - 1;
  return span;
}

/// Three blocks of inception temporal convolution (causal left padding keeps
/// the sequence length) followed by graph mixing H' = H + (D_O^-1 A) H W,
/// then a linear head over the flattened features.
struct MtgnnForecasterParams {
  struct Block {
    std::vector<Tensor> conv_w;  // per kernel size: [c, c_in, k]
    Tensor mix_w;                // [c, 3c, 1]
    Tensor graph_w;              // [c, c, 1]
  };
  std::vector<Block> blocks;
  Tensor head_w;  // [c * w, horizon]
  Tensor head_b;  // [horizon]
  int window = 20;
  int channels = 16;
  int horizon = 12;

  static MtgnnForecasterParams init(int window, int horizon, RngStream& rng, int channels = 16) {
    if (window < mtgnn_receptive_field()) {
      throw std::invalid_argument("MtgnnForecasterParams: window " + std::to_string(window) +
                                  " is shorter than the receptive field " +
                                  std::to_string(mtgnn_receptive_field()));
    }
    MtgnnForecasterParams p;
    p.window = window;
    p.channels = channels;
    p.horizon = horizon;
    int c_in = 1;
    for (int b = 0; b < kMtgnnBlocks; ++b) {
      Block blk;
      for (int k : kInceptionKernels) blk.conv_w.push_back(glorot({channels, c_in, k}, rng));
      blk.mix_w = glorot({channels, 3 * channels, 1}, rng);
      blk.graph_w = glorot({channels, channels, 1}, rng);
      p.blocks.push_back(std::move(blk));
      c_in = channels;
    }
    p.head_w = glorot({channels * window, horizon}, rng);
    p.head_b = Tensor::zeros({horizon});
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    for (size_t b = 0; b < blocks.size(); ++b) {
      const std::string pre = "b" + std::to_string(b) + "_";
      for (size_t k = 0; k < blocks[b].conv_w.size(); ++k) {
        ps.add(pre + "conv" + std::to_string(kInceptionKernels[k]), blocks[b].conv_w[k]);
      }
      ps.add(pre + "mix", blocks[b].mix_w);
      ps.add(pre + "graph", blocks[b].graph_w);
    }
    ps.add("head_w", head_w);
    ps.add("head_b", head_b);
    return ps;
  }
};

/// window: [N, w] or [B, N, w] -> [N, horizon] or [B, N, horizon].
inline Tensor mtgnn_forecast(const Tensor& window, const Tensor& A,
                             const MtgnnForecasterParams& p) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  if (w != p.window) {
    throw std::invalid_argument("mtgnn_forecast: window length " + std::to_string(w) +
                                " does not match configured length " + std::to_string(p.window));
  }
  if (w < mtgnn_receptive_field()) {
    throw std::invalid_argument("mtgnn_forecast: window shorter than the receptive field " +
                                std::to_string(mtgnn_receptive_field()));
  }
  for (double v : A.data()) {
    if (v < 0.0) throw std::invalid_argument("mtgnn_forecast: adjacency has negative entries");
  }
  Tensor p_out = row_normalize(A);
  const int c = p.channels;
  Tensor h = reshape(batched ? window : reshape(window, {1, n, w}), {b * n, 1, w});
  for (const auto& blk : p.blocks) {
    const int c_in = blk.conv_w[0].dim(1);
    std::vector<Tensor> branches;
    for (size_t k = 0; k < blk.conv_w.size(); ++k) {
      const int kernel = blk.conv_w[k].dim(2);
      Tensor padded = concat(Tensor::zeros({b * n, c_in, kernel - 1}), h);
      // [B*N, c, w] flattens to c contiguous length-w blocks, so last-axis
      // concat of the flattened branches is channel concat.
      branches.push_back(reshape(conv1d(padded, blk.conv_w[k]), {b * n, c * w}));
    }
    Tensor t = relu(conv1d(reshape(concat(branches), {b * n, 3 * c, w}), blk.mix_w));
    Tensor mixed = left_matmul(p_out, reshape(t, {b, n, c * w}));
    Tensor g = conv1d(reshape(mixed, {b * n, c, w}), blk.graph_w);
    h = add(t, g);
  }
  Tensor out = add(matmul(reshape(h, {b * n, c * w}), p.head_w), p.head_b);
  return batched ? reshape(out, {b, n, p.horizon}) : reshape(out, {n, p.horizon});
}

}  // namespace lgf

#endif  // LGF_MODEL_MTGNN_FORECASTER_HPP_
