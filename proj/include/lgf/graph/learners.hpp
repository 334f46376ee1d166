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

#ifndef LGF_GRAPH_LEARNERS_HPP_
#define LGF_GRAPH_LEARNERS_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgf/core/gumbel.hpp"
#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/rng.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

struct LearnerOutput {
  EdgeScores scores;
  AdjacencyMatrix adjacency;
};

// ---------------------------------------------------------------------------
// Embedding-based learner (skew-score + top-K).
// ---------------------------------------------------------------------------

/// Two embedding matrices plus a saturation scalar; the learner that keeps
/// only one direction of every node pair.
struct NodePairEmbeddings {
  Tensor e1;  // [N, d]
  Tensor e2;  // [N, d]
  double saturation = 3.0;
};

/// scores = ReLU(tanh(alpha (M1 M2^T - M2 M1^T))), M_i = tanh(alpha E_i W_i);
/// adjacency keeps the K largest scores per row. The top-K mask is a constant
/// in the backward pass.
inline LearnerOutput mtgnn_adjacency(const NodePairEmbeddings& emb, const Tensor& w1,
                                     const Tensor& w2, int k) {
  const int n = emb.e1.dim(0);
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("mtgnn_adjacency: K must lie in [1, N-1], got " + std::to_string(k));
  }
  if (emb.saturation <= 0.0) {
    throw std::invalid_argument("mtgnn_adjacency: saturation alpha must be positive");
  }
  const double a = emb.saturation;
  Tensor m1 = tanh_op(scale(matmul(emb.e1, w1), a));
  Tensor m2 = tanh_op(scale(matmul(emb.e2, w2), a));
  Tensor skew = sub(matmul(m1, transpose(m2)), matmul(m2, transpose(m1)));
  Tensor scores = relu(tanh_op(scale(skew, a)));
  Tensor mask = top_k_row_mask(scores.detach(), k);
  Tensor adj = mul(scores, mask);
  return LearnerOutput{EdgeScores{scores, "mtgnn"},
                       AdjacencyMatrix{adj, true, GraphSource::kLearnedMtgnn}};
}

// ---------------------------------------------------------------------------
// Cosine kNN learner.
// ---------------------------------------------------------------------------

/// scores_ij = cosine(v_i, v_j) for i != j; adjacency is the directed binary
/// kNN graph (K highest-cosine neighbors per node, ties to lower index).
/// The discrete graph carries no gradient; the embeddings train through
/// their use in the forecaster.
inline LearnerOutput gdn_knn_adjacency(const Tensor& v, int k) {
  const int n = v.dim(0), d = v.dim(1);
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("gdn_knn_adjacency: K must lie in [1, N-1], got " + std::to_string(k));
  }
  std::vector<double> norms(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int c = 0; c < d; ++c) s += v(i, c) * v(i, c);
    if (s <= 0.0) {
      throw std::invalid_argument("gdn_knn_adjacency: embedding row " + std::to_string(i) +
                                  " has zero norm");
    }
    norms[static_cast<size_t>(i)] = std::sqrt(s);
  }
  Tensor scores = Tensor::zeros({n, n});
  {
    auto& s = scores.mutable_data();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double dot = 0;
        for (int c = 0; c < d; ++c) dot += v(i, c) * v(j, c);
        s[static_cast<size_t>(i) * n + j] = dot / (norms[static_cast<size_t>(i)] * norms[static_cast<size_t>(j)]);
      }
    }
  }
  AdjacencyMatrix adj{top_k_row_mask(scores, k), true, GraphSource::kLearnedGdn};
  return LearnerOutput{EdgeScores{scores, "gdn"}, adj};
}

// ---------------------------------------------------------------------------
// Series-encoder learner (conv stack + pairwise MLP + Gumbel-Bernoulli).
// ---------------------------------------------------------------------------

/// Shared 1-D conv encoder over the whole training series plus the pairwise
/// edge MLP. Conv layers are bias-free; the FC layer and MLP carry biases.
struct SeriesEncoderParams {
  Tensor conv1_w;  // [c1, 1, kernel]
  Tensor conv2_w;  // [c2, c1, kernel]
  Tensor fc_w;     // [flat, d]
  Tensor fc_b;     // [d]
  Tensor pair_w1;  // [2d, hidden]
  Tensor pair_b1;  // [hidden]
  Tensor pair_w2;  // [hidden, 1]
  Tensor pair_b2;  // [1]
  int kernel = 8;
  int stride = 4;

  /// Layer sizes follow the defaults (kernel 8, stride 4, channels 8/16);
  /// they shrink for tiny test instances via the arguments.
  static SeriesEncoderParams init(int t_train, int d, RngStream& rng, int c1 = 8, int c2 = 16,
                                  int kernel = 8, int stride = 4, int pair_hidden = 16) {
    const int l1 = conv1d_output_length(t_train, kernel, stride, 1);
    const int l2 = conv1d_output_length(l1, kernel, stride, 1);
    if (l2 < 1) {
      throw std::invalid_argument("SeriesEncoderParams: training series of length " +
                                  std::to_string(t_train) + " is shorter than the conv receptive field");
    }
    SeriesEncoderParams p;
    p.kernel = kernel;
    p.stride = stride;
    p.conv1_w = glorot({c1, 1, kernel}, rng);
    p.conv2_w = glorot({c2, c1, kernel}, rng);
    p.fc_w = glorot({c2 * l2, d}, rng);
    p.fc_b = Tensor::zeros({d});
    p.pair_w1 = glorot({2 * d, pair_hidden}, rng);
    p.pair_b1 = Tensor::zeros({pair_hidden});
    p.pair_w2 = glorot({pair_hidden, 1}, rng);
    p.pair_b2 = Tensor::zeros({1});
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    ps.add("conv1_w", conv1_w);
    ps.add("conv2_w", conv2_w);
    ps.add("fc_w", fc_w);
    ps.add("fc_b", fc_b);
    ps.add("pair_w1", pair_w1);
    ps.add("pair_b1", pair_b1);
    ps.add("pair_w2", pair_w2);
    ps.add("pair_b2", pair_b2);
    return ps;
  }
};

/// h_i = FC(Vec(conv(z_i))); one shared encoder for all nodes.
inline Tensor gts_encode_series(const Tensor& train_series, const SeriesEncoderParams& p) {
  const int n = train_series.dim(0);
  const int t = train_series.dim(1);
  Tensor x = reshape(train_series, {n, 1, t});
  Tensor h1;
  try {
    h1 = relu(conv1d(x, p.conv1_w, p.stride));
    h1 = relu(conv1d(h1, p.conv2_w, p.stride));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("gts_encode_series: training series of length " + std::to_string(t) +
                                " is shorter than the conv receptive field");
  }
  Tensor flat = reshape(h1, {n, h1.size() / n});
  return add(matmul(flat, p.fc_w), p.fc_b);
}

/// Pre-sigmoid pairwise logits; theta = sigmoid(logits).
inline Tensor gts_edge_logits(const Tensor& h, const SeriesEncoderParams& p) {
  const int n = h.dim(0);
  Tensor pairs = concat(pair_source(h), pair_target(h));  // [N*N, 2d]
  Tensor hidden = relu(add(matmul(pairs, p.pair_w1), p.pair_b1));
  Tensor logits = add(matmul(hidden, p.pair_w2), p.pair_b2);
  return reshape(logits, {n, n});
}

inline Tensor gts_edge_probabilities(const Tensor& h, const SeriesEncoderParams& p) {
  return sigmoid(gts_edge_logits(h, p));
}

/// Element-wise straight-through Gumbel-Bernoulli sample of theta; binary
/// forward values, zero diagonal.
inline AdjacencyMatrix gts_sample_adjacency(const Tensor& theta, double temperature, RngStream& rng) {
  const int n = theta.dim(0);
  for (double v : theta.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("gts_sample_adjacency: probabilities must lie in [0,1]");
    }
  }
  Tensor sample = gumbel_bernoulli(theta, temperature, rng);
  Tensor off_diag = Tensor::full({n, n}, 1.0);
  for (int i = 0; i < n; ++i) off_diag.mutable_data()[static_cast<size_t>(i) * n + i] = 0.0;
  return AdjacencyMatrix{mul(sample, off_diag), true, GraphSource::kLearnedGts};
}

// ---------------------------------------------------------------------------
// Per-window relational encoder (two message-passing rounds).
// ---------------------------------------------------------------------------

struct NriEncoderParams {
  // f_emb: w -> h -> h, f_e1: 2h -> h -> h, f_v1: h -> h -> h, f_e2: 2h -> h -> E.
  Tensor emb_w1, emb_b1, emb_w2, emb_b2;
  Tensor e1_w1, e1_b1, e1_w2, e1_b2;
  Tensor v1_w1, v1_b1, v1_w2, v1_b2;
  Tensor e2_w1, e2_b1, e2_w2, e2_b2;
  int edge_types = 2;  // type 0 denotes `no edge'
  int window = 20;

  static NriEncoderParams init(int window, int hidden, int edge_types, RngStream& rng) {
    if (edge_types < 2) throw std::invalid_argument("NriEncoderParams: need at least 2 edge types");
    NriEncoderParams p;
    p.edge_types = edge_types;
    p.window = window;
    auto mlp = [&rng](Tensor& w1, Tensor& b1, Tensor& w2, Tensor& b2, int in, int mid, int out) {
      w1 = glorot({in, mid}, rng);
      b1 = Tensor::zeros({mid});
      w2 = glorot({mid, out}, rng);
      b2 = Tensor::zeros({out});
    };
    mlp(p.emb_w1, p.emb_b1, p.emb_w2, p.emb_b2, window, hidden, hidden);
    mlp(p.e1_w1, p.e1_b1, p.e1_w2, p.e1_b2, 2 * hidden, hidden, hidden);
    mlp(p.v1_w1, p.v1_b1, p.v1_w2, p.v1_b2, hidden, hidden, hidden);
    mlp(p.e2_w1, p.e2_b1, p.e2_w2, p.e2_b2, 2 * hidden, hidden, edge_types);
    return p;
  }

  ParamSet param_set() {
    ParamSet ps;
    ps.add("emb_w1", emb_w1); ps.add("emb_b1", emb_b1);
    ps.add("emb_w2", emb_w2); ps.add("emb_b2", emb_b2);
    ps.add("e1_w1", e1_w1); ps.add("e1_b1", e1_b1);
    ps.add("e1_w2", e1_w2); ps.add("e1_b2", e1_b2);
    ps.add("v1_w1", v1_w1); ps.add("v1_b1", v1_b1);
    ps.add("v1_w2", v1_w2); ps.add("v1_b2", v1_b2);
    ps.add("e2_w1", e2_w1); ps.add("e2_b1", e2_b1);
    ps.add("e2_w2", e2_w2); ps.add("e2_b2", e2_b2);
    return ps;
  }
};

/// Constant [N, N*N] matrix summing incoming-pair values per target node:
/// row j selects pairs (i, j), i != j, under pair index p = i*N + j.
inline Tensor incoming_pair_sum_matrix(int n) {
  Tensor s = Tensor::zeros({n, n * n});
  auto& d = s.mutable_data();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j) d[static_cast<size_t>(j) * n * n + i * n + j] = 1.0;
    }
  }
  return s;
}

namespace detail {
inline Tensor mlp2(const Tensor& x, const Tensor& w1, const Tensor& b1, const Tensor& w2,
                   const Tensor& b2) {
  return add(matmul(relu(add(matmul(x, w1), b1)), w2), b2);
}
}  // namespace detail

/// Edge-type logits for one window (or a batch of windows):
/// [N, w] -> [N, N, E], or [B, N, w] -> [B, N, N, E].
inline Tensor nri_encode_window(const Tensor& window, const NriEncoderParams& p) {
  const bool batched = window.ndim() == 3;
  const int b = batched ? window.dim(0) : 1;
  const int n = window.dim(batched ? 1 : 0);
  const int w = window.dim(batched ? 2 : 1);
  if (w != p.window) {
    throw std::invalid_argument("nri_encode_window: window length " + std::to_string(w) +
                                " does not match configured length " + std::to_string(p.window));
  }
  Tensor x = batched ? window : reshape(window, {1, n, w});
  Tensor h1 = detail::mlp2(reshape(x, {b * n, w}), p.emb_w1, p.emb_b1, p.emb_w2, p.emb_b2);
  h1 = reshape(h1, {b, n, h1.dim(1)});
  Tensor pair1 = concat(pair_source(h1), pair_target(h1));  // [B, N*N, 2h]
  Tensor e1 = detail::mlp2(reshape(pair1, {b * n * n, pair1.dim(2)}), p.e1_w1, p.e1_b1, p.e1_w2, p.e1_b2);
  e1 = reshape(e1, {b, n * n, e1.dim(1)});
  Tensor h2 = left_matmul(incoming_pair_sum_matrix(n), e1);  // [B, N, h]
  h2 = detail::mlp2(reshape(h2, {b * n, h2.dim(2)}), p.v1_w1, p.v1_b1, p.v1_w2, p.v1_b2);
  h2 = reshape(h2, {b, n, h2.dim(1)});
  Tensor pair2 = concat(pair_source(h2), pair_target(h2));
  Tensor logits = detail::mlp2(reshape(pair2, {b * n * n, pair2.dim(2)}), p.e2_w1, p.e2_b1, p.e2_w2, p.e2_b2);
  return batched ? reshape(logits, {b, n, n, p.edge_types}) : reshape(logits, {n, n, p.edge_types});
}

/// Posterior q over edge types (softmax of the logits along the type axis).
inline Tensor nri_edge_posterior(const Tensor& logits) { return softmax(logits); }

// ---------------------------------------------------------------------------
// Random baseline graph.
// ---------------------------------------------------------------------------

/// Expected degree by node-count bracket (30 / 10 / 3).
inline int er_expected_degree(int n) { return n >= 100 ? 30 : (n >= 20 ? 10 : 3); }

/// Directed Erdos-Renyi graph with p = deg(N)/(N-1), no self-loops.
inline AdjacencyMatrix er_random_graph(int n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("er_random_graph: need at least 2 nodes");
  const double p = static_cast<double>(er_expected_degree(n)) / (n - 1);
  AdjacencyMatrix a = AdjacencyMatrix::empty(n, GraphSource::kRandom);
  auto& w = a.weights.mutable_data();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && rng.bernoulli(p)) w[static_cast<size_t>(i) * n + j] = 1.0;
    }
  }
  return a;
}

}  // namespace lgf

#endif  // LGF_GRAPH_LEARNERS_HPP_
