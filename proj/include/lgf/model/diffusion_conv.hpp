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

#ifndef LGF_MODEL_DIFFUSION_CONV_HPP_
#define LGF_MODEL_DIFFUSION_CONV_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/rng.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

/// D_I^-1 A where D_I holds in-degrees (column sums of A), with 1/0 := 0.
/// Row i is divided by the in-degree of node i.
inline Tensor in_degree_normalize(const Tensor& A) {
  check_shape(A.ndim() == 2 && A.dim(0) == A.dim(1),
              "in_degree_normalize: need a square matrix, got " + shape_str(A.shape()));
  const int n = A.dim(0);
  std::vector<double> degree(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) degree[static_cast<size_t>(j)] += A(i, j);
  }
  Tensor out = Tensor::zeros({n, n});
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) {
      if (degree[static_cast<size_t>(i)] != 0.0) {
        for (int j = 0; j < n; ++j) o[static_cast<size_t>(i) * n + j] = A(i, j) / degree[static_cast<size_t>(i)];
      }
    }
  }
  Tape* tp = tape_of({&A});
  const int An = A.on_tape() ? A.node : -1;
  const Tensor y = out.detach();
  detail::attach(out, tp, "in_degree_normalize", [y, An, n, degree](const std::vector<double>& g, Tape& t) {
    if (An >= 0) {
      // y_ij = a_ij / s_i with s_i = sum_k a_ki: a_pq appears directly in
      // row p and inside the divisor of row q.
      std::vector<double> dots(static_cast<size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) dots[static_cast<size_t>(i)] += g[static_cast<size_t>(i) * n + j] * y(i, j);
      }
      std::vector<double> gA(static_cast<size_t>(n) * n, 0.0);
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          double v = 0.0;
          const double sp = degree[static_cast<size_t>(p)];
          const double sq = degree[static_cast<size_t>(q)];
          if (sp != 0.0) v += g[static_cast<size_t>(p) * n + q] / sp;
          if (sq != 0.0) v -= dots[static_cast<size_t>(q)] / sq;
          gA[static_cast<size_t>(p) * n + q] = v;
        }
      }
      t.accumulate(An, gA);
    }
  });
  return out;
}

/// Per-hop weight matrices for the out-degree and in-degree diffusion paths.
struct DiffusionWeights {
  std::vector<Tensor> w_out;  // K matrices [d_in, d_out]
  std::vector<Tensor> w_in;   // K matrices [d_in, d_out]

  static DiffusionWeights init(int d_in, int d_out, int K, RngStream& rng) {
    DiffusionWeights w;
    for (int k = 0; k < K; ++k) {
      w.w_out.push_back(glorot({d_in, d_out}, rng));
      w.w_in.push_back(glorot({d_in, d_out}, rng));
    }
    return w;
  }

  void register_params(ParamSet& ps, const std::string& prefix) {
    for (size_t k = 0; k < w_out.size(); ++k) {
      ps.add(prefix + "_wo" + std::to_string(k + 1), w_out[k]);
      ps.add(prefix + "_wi" + std::to_string(k + 1), w_in[k]);
    }
  }
};

/// GNN(Z; A) = sum_{k=1..K} (D_O^-1 A)^k Z W_O^(k) + (D_I^-1 A)^k Z W_I^(k).
/// Z is [N, d_in] or [B, N, d_in]; zero-degree rows/columns contribute zero.
inline Tensor graph_diffusion_conv(const Tensor& Z, const Tensor& A, const DiffusionWeights& w,
                                   int K = 2) {
  if (K < 1) throw std::invalid_argument("graph_diffusion_conv: K must be at least 1");
  if (static_cast<int>(w.w_out.size()) < K || static_cast<int>(w.w_in.size()) < K) {
    throw std::invalid_argument("graph_diffusion_conv: fewer weight matrices than hops");
  }
  for (double v : A.data()) {
    if (v < 0.0) throw std::invalid_argument("graph_diffusion_conv: adjacency has negative entries");
  }
  const bool batched = Z.ndim() == 3;
  Tensor p_out = row_normalize(A);
  Tensor p_in = in_degree_normalize(A);
  auto mix = [batched](const Tensor& P, const Tensor& X) {
    return batched ? left_matmul(P, X) : matmul(P, X);
  };
  auto apply_w = [batched](const Tensor& X, const Tensor& W) {
    if (!batched) return matmul(X, W);
    const int b = X.dim(0), n = X.dim(1);
    return reshape(matmul(reshape(X, {b * n, X.dim(2)}), W), {b, n, W.dim(1)});
  };
  Tensor xo = Z, xi = Z, acc;
  for (int k = 0; k < K; ++k) {
    xo = mix(p_out, xo);
    xi = mix(p_in, xi);
    Tensor term = add(apply_w(xo, w.w_out[static_cast<size_t>(k)]),
                      apply_w(xi, w.w_in[static_cast<size_t>(k)]));
    acc = k == 0 ? term : add(acc, term);
  }
  return acc;
}

}  // namespace lgf

#endif  // LGF_MODEL_DIFFUSION_CONV_HPP_
