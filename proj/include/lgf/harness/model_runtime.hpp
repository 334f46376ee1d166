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

#ifndef LGF_HARNESS_MODEL_RUNTIME_HPP_
#define LGF_HARNESS_MODEL_RUNTIME_HPP_

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/gumbel.hpp"
#include "lgf/graph/learners.hpp"
#include "lgf/harness/config.hpp"
#include "lgf/model/dcrnn.hpp"
#include "lgf/model/gdn_forecaster.hpp"
#include "lgf/model/lstm.hpp"
#include "lgf/model/mtgnn_forecaster.hpp"
#include "lgf/model/nri_decoder.hpp"

namespace lgf {

/// Cap on training windows averaged into the relational encoder's edge-score
/// matrix after training.
inline constexpr int kNriScoreWindows = 64;

inline Tensor zero_diagonal(const Tensor& m) {
  const int n = m.dim(0);
  Tensor off = Tensor::full({n, n}, 1.0);
  for (int i = 0; i < n; ++i) off.mutable_data()[static_cast<size_t>(i) * n + i] = 0.0;
  return mul(m, off);
}

inline Tensor binarize(const Tensor& m) {
  Tensor out = Tensor::zeros(m.shape());
  auto& o = out.mutable_data();
  for (size_t i = 0; i < m.data().size(); ++i) o[i] = m.data()[i] != 0.0 ? 1.0 : 0.0;
  return out;
}

/// Per-row top-K budget for the embedding learners, clamped to the valid
/// range and following the expected-degree brackets of the random baseline.
inline int learner_top_k(int n) { return std::min(n - 1, er_expected_degree(n)); }

/// One model instance plus its graph-source policy. Owns all learnable
/// tensors; `param_set()` hands out non-owning views, so the runtime must
/// stay put while they are in use (it is heap-allocated for that reason).
class ModelRuntime {
 public:
  static std::unique_ptr<ModelRuntime> create(const ExperimentConfig& cfg, int nodes,
                                              const Tensor& train_series,
                                              const AdjacencyMatrix* ground_truth,
                                              RngStream& rng) {
    auto rt = std::unique_ptr<ModelRuntime>(new ModelRuntime());
    rt->cfg_ = cfg;
    rt->nodes_ = nodes;
    rt->train_series_ = train_series;
    if (ground_truth) {
      if (ground_truth->nodes() != nodes) {
        throw std::invalid_argument("ModelRuntime: ground-truth graph has " +
                                    std::to_string(ground_truth->nodes()) + " nodes, data has " +
                                    std::to_string(nodes));
      }
      rt->gt_binary_ = binarize(ground_truth->weights);
      rt->has_gt_ = true;
    }
    const bool needs_graph = cfg.model != ModelKind::kLstm && cfg.model != ModelKind::kLstmU;
    if (needs_graph) {
      switch (cfg.graph_source) {
        case GraphMode::kLearned:
          break;
        case GraphMode::kGroundTruth:
          if (!rt->has_gt_) {
            throw std::invalid_argument("ModelRuntime: graph_source=ground-truth but no graph given");
          }
          rt->fixed_adjacency_ = rt->gt_binary_;
          break;
        case GraphMode::kRandom: {
          RngStream graph_rng = rng.split(11);
          rt->fixed_adjacency_ = er_random_graph(nodes, graph_rng).weights;
          break;
        }
        case GraphMode::kNone:
          rt->fixed_adjacency_ = Tensor::zeros({nodes, nodes});
          break;
      }
    }
    RngStream init_rng = rng.split(12);
    switch (cfg.model) {
      case ModelKind::kGts:
        if (cfg.graph_source == GraphMode::kLearned) {
          rt->gts_enc_ = SeriesEncoderParams::init(train_series.dim(1), cfg.embed_dim, init_rng);
        }
        rt->dcrnn_ = DcrnnParams::init(cfg.window, cfg.dcrnn_hidden, init_rng);
        break;
      case ModelKind::kMtgnn:
        if (cfg.graph_source == GraphMode::kLearned) {
          rt->mtgnn_emb_.e1 = glorot({nodes, cfg.embed_dim}, init_rng);
          rt->mtgnn_emb_.e2 = glorot({nodes, cfg.embed_dim}, init_rng);
          rt->mtgnn_w1_ = glorot({cfg.embed_dim, cfg.embed_dim}, init_rng);
          rt->mtgnn_w2_ = glorot({cfg.embed_dim, cfg.embed_dim}, init_rng);
        }
        rt->mtgnn_ = MtgnnForecasterParams::init(cfg.window, cfg.horizon, init_rng);
        break;
      case ModelKind::kGdn:
        rt->gdn_ = GdnForecasterParams::init(nodes, cfg.window, cfg.embed_dim, cfg.horizon, init_rng);
        break;
      case ModelKind::kNri:
        if (cfg.graph_source == GraphMode::kLearned) {
          rt->nri_enc_ = NriEncoderParams::init(cfg.window, cfg.nri_hidden, cfg.edge_types, init_rng);
        }
        rt->nri_dec_ = NriDecoderParams::init(cfg.edge_types, cfg.decoder_hidden, init_rng);
        break;
      case ModelKind::kLstm:
        rt->lstm_ = JointLstmParams::init(nodes, cfg.window, cfg.lstm_hidden, init_rng);
        break;
      case ModelKind::kLstmU:
        rt->lstm_u_ = LstmUParams::init(nodes, cfg.window, cfg.lstm_hidden, init_rng);
        break;
    }
    return rt;
  }

  const ExperimentConfig& config() const { return cfg_; }
  int nodes() const { return nodes_; }

  ParamSet param_set() {
    ParamSet ps;
    const bool learned = cfg_.graph_source == GraphMode::kLearned;
    switch (cfg_.model) {
      case ModelKind::kGts:
        if (learned) ps.merge(gts_enc_.param_set(), "enc_");
        ps.merge(dcrnn_.param_set(), "fc_");
        break;
      case ModelKind::kMtgnn:
        if (learned) {
          ps.add("emb_e1", mtgnn_emb_.e1);
          ps.add("emb_e2", mtgnn_emb_.e2);
          ps.add("emb_w1", mtgnn_w1_);
          ps.add("emb_w2", mtgnn_w2_);
        }
        ps.merge(mtgnn_.param_set(), "fc_");
        break;
      case ModelKind::kGdn:
        ps.merge(gdn_.param_set(), "fc_");
        break;
      case ModelKind::kNri:
        if (learned) ps.merge(nri_enc_.param_set(), "enc_");
        ps.merge(nri_dec_.param_set(), "dec_");
        break;
      case ModelKind::kLstm:
        ps.merge(lstm_.param_set(), "fc_");
        break;
      case ModelKind::kLstmU:
        ps.merge(lstm_u_.param_set(), "fc_");
        break;
    }
    return ps;
  }

  /// One forward pass over a [B, N, w] batch; returns [B, N, horizon]
  /// normalized predictions. During training the learned graph is sampled
  /// where the learner is stochastic; at evaluation it is deterministic.
  Tensor forward(const Tensor& inputs, bool training, RngStream& rng) {
    pending_regularizer_ = Tensor();
    const bool learned = cfg_.graph_source == GraphMode::kLearned;
    switch (cfg_.model) {
      case ModelKind::kGts: {
        Tensor A;
        if (learned) {
          Tensor h = gts_encode_series(train_series_, gts_enc_);
          Tensor logits = gts_edge_logits(h, gts_enc_);
          Tensor theta = sigmoid(logits);
          if (training) {
            A = gts_sample_adjacency(theta, cfg_.temperature, rng).weights;
            if (cfg_.lambda_reg > 0.0 && has_gt_) {
              pending_regularizer_ =
                  scale(mean_all(bce_with_logits(logits, gt_binary_)), cfg_.lambda_reg);
            }
          } else {
            A = zero_diagonal(theta);
          }
        } else {
          A = fixed_adjacency_;
        }
        return dcrnn_forecast(inputs, A, dcrnn_, cfg_.horizon);
      }
      case ModelKind::kMtgnn: {
        Tensor A = learned ? mtgnn_adjacency(mtgnn_emb_, mtgnn_w1_, mtgnn_w2_,
                                             learner_top_k(nodes_)).adjacency.weights
                           : fixed_adjacency_;
        return mtgnn_forecast(inputs, A, mtgnn_);
      }
      case ModelKind::kGdn: {
        Tensor A = learned ? gdn_knn_adjacency(gdn_.embed, learner_top_k(nodes_)).adjacency.weights
                           : fixed_adjacency_;
        return gdn_forecast(inputs, A, gdn_);
      }
      case ModelKind::kNri: {
        Tensor onehots;
        if (learned) {
          Tensor logits = nri_encode_window(inputs, nri_enc_);
          onehots = training ? gumbel_softmax(logits, cfg_.temperature, true, rng)
                             : straight_through_onehot(nri_edge_posterior(logits));
        } else {
          onehots = fixed_onehots();
        }
        return nri_decode(inputs, onehots, nri_dec_, cfg_.horizon);
      }
      case ModelKind::kLstm:
        return lstm_forecast(inputs, lstm_, cfg_.horizon);
      case ModelKind::kLstmU:
        return lstm_u_forecast(inputs, lstm_u_, cfg_.horizon);
    }
    throw std::logic_error("ModelRuntime::forward: unreachable");
  }

  /// Extra loss term produced by the last training forward (empty tensor
  /// when the active configuration adds none).
  Tensor take_regularizer() {
    Tensor r = pending_regularizer_;
    pending_regularizer_ = Tensor();
    return r;
  }

  /// Continuous pairwise scores after training, on the trained parameters.
  /// Non-learned modes score with their fixed graph; graph-free models emit
  /// a zero (zero-variance) matrix.
  Tensor edge_score_matrix() {
    const bool learned = cfg_.graph_source == GraphMode::kLearned;
    if (!learned) {
      if (cfg_.model == ModelKind::kLstm || cfg_.model == ModelKind::kLstmU ||
          fixed_adjacency_.ndim() != 2) {
        return Tensor::zeros({nodes_, nodes_});
      }
      return fixed_adjacency_;
    }
    switch (cfg_.model) {
      case ModelKind::kGts: {
        Tensor h = gts_encode_series(train_series_, gts_enc_);
        return zero_diagonal(gts_edge_probabilities(h, gts_enc_));
      }
      case ModelKind::kMtgnn:
        return mtgnn_adjacency(mtgnn_emb_, mtgnn_w1_, mtgnn_w2_, learner_top_k(nodes_))
            .scores.scores;
      case ModelKind::kGdn:
        return gdn_knn_adjacency(gdn_.embed, learner_top_k(nodes_)).scores.scores;
      case ModelKind::kNri:
        return nri_mean_edge_scores();
      default:
        return Tensor::zeros({nodes_, nodes_});
    }
  }

  /// Deterministic evaluation-time adjacency for the run record.
  Tensor eval_adjacency() {
    const bool learned = cfg_.graph_source == GraphMode::kLearned;
    if (!learned) {
      if (fixed_adjacency_.ndim() != 2) return Tensor::zeros({nodes_, nodes_});
      return fixed_adjacency_;
    }
    switch (cfg_.model) {
      case ModelKind::kGts: {
        Tensor h = gts_encode_series(train_series_, gts_enc_);
        return zero_diagonal(gts_edge_probabilities(h, gts_enc_));
      }
      case ModelKind::kMtgnn:
        return mtgnn_adjacency(mtgnn_emb_, mtgnn_w1_, mtgnn_w2_, learner_top_k(nodes_))
            .adjacency.weights;
      case ModelKind::kGdn:
        return gdn_knn_adjacency(gdn_.embed, learner_top_k(nodes_)).adjacency.weights;
      case ModelKind::kNri: {
        // Edge wherever the averaged non-silent posterior mass passes 1/2.
        Tensor s = nri_mean_edge_scores();
        Tensor a = Tensor::zeros({nodes_, nodes_});
        auto& av = a.mutable_data();
        for (size_t i = 0; i < s.data().size(); ++i) av[i] = s.data()[i] > 0.5 ? 1.0 : 0.0;
        return zero_diagonal(a);
      }
      default:
        return Tensor::zeros({nodes_, nodes_});
    }
  }

 private:
  ModelRuntime() = default;

  /// Binary graph lifted to per-pair one-hot edge types: edges become type 1,
  /// non-edges (and the diagonal) type 0.
  Tensor fixed_onehots() const {
    const int n = nodes_, E = cfg_.edge_types;
    Tensor oh = Tensor::zeros({n, n, E});
    auto& o = oh.mutable_data();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const bool edge = i != j && fixed_adjacency_(i, j) != 0.0;
        o[(static_cast<size_t>(i) * n + j) * E + (edge ? 1 : 0)] = 1.0;
      }
    }
    return oh;
  }

  /// Mean probability of any non-silent edge type over up to kNriScoreWindows
  /// training windows.
  Tensor nri_mean_edge_scores() {
    const int n = nodes_, w = cfg_.window, E = cfg_.edge_types;
    const int t_train = train_series_.dim(1);
    const int available = std::max(0, t_train - w + 1);
    if (available == 0) {
      throw std::invalid_argument("ModelRuntime: training split shorter than one window");
    }
    const int count = std::min(available, kNriScoreWindows);
    const int stride = std::max(1, available / count);
    Tensor acc = Tensor::zeros({n, n});
    auto& av = acc.mutable_data();
    int used = 0;
    for (int s = 0; s + w <= t_train && used < count; s += stride, ++used) {
      Tensor win = Tensor::zeros({n, w});
      for (int i = 0; i < n; ++i) {
        for (int t = 0; t < w; ++t) {
          win.mutable_data()[static_cast<size_t>(i) * w + t] = train_series_(i, s + t);
        }
      }
      Tensor post = nri_edge_posterior(nri_encode_window(win, nri_enc_));  // [N, N, E]
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double mass = 0;
          for (int e = 1; e < E; ++e) {
            mass += post.data()[(static_cast<size_t>(i) * n + j) * E + e];
          }
          av[static_cast<size_t>(i) * n + j] += mass;
        }
      }
    }
    for (double& v : av) v /= used;
    return acc;
  }

  ExperimentConfig cfg_;
  int nodes_ = 0;
  Tensor train_series_;
  Tensor fixed_adjacency_;
  Tensor gt_binary_;
  bool has_gt_ = false;
  Tensor pending_regularizer_;

  SeriesEncoderParams gts_enc_;
  DcrnnParams dcrnn_;
  NodePairEmbeddings mtgnn_emb_;
  Tensor mtgnn_w1_, mtgnn_w2_;
  MtgnnForecasterParams mtgnn_;
  GdnForecasterParams gdn_;
  NriEncoderParams nri_enc_;
  NriDecoderParams nri_dec_;
  JointLstmParams lstm_;
  LstmUParams lstm_u_;
};

}  // namespace lgf

#endif  // LGF_HARNESS_MODEL_RUNTIME_HPP_
