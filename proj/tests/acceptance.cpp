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

// Acceptance gate. Usage: acceptance <criterion 1..10>; prints one
// `criterion N: PASS|FAIL` line and exits 0 on pass, 1 on fail.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lgf/core/gradcheck.hpp"
#include "lgf/data/generators.hpp"
#include "lgf/harness/ablation.hpp"
#include "lgf/harness/correlate.hpp"
#include "lgf/harness/train.hpp"

using namespace lgf;

namespace {

// Tolerances and budgets, pinned.
constexpr double kFdTolerance = 1e-4;
constexpr double kDenseConvTolerance = 1e-10;
constexpr double kPprRowSumTolerance = 1e-10;
constexpr double kPprNeumannTolerance = 1e-8;
constexpr double kDiffusionGapPct = 5.0;
constexpr int kDeskSeeds = 3;

Tensor randn(Shape s, RngStream& rng, double sd = 1.0) {
  Tensor t = Tensor::zeros(std::move(s));
  for (double& v : t.mutable_data()) v = rng.normal() * sd;
  return t;
}

Tensor rand_positive(Shape s, RngStream& rng) {
  Tensor t = Tensor::zeros(std::move(s));
  for (double& v : t.mutable_data()) v = rng.uniform(0.2, 1.0);
  return t;
}

template <typename Params, typename LossFn>
double model_fd(Params& proto, const LossFn& loss_fn, double eps) {
  ParamSet ps = proto.param_set();
  std::vector<Tensor> init;
  for (size_t i = 0; i < ps.size(); ++i) init.push_back(ps.tensor(i));
  ScalarFn fn = [&proto, &loss_fn](std::vector<Tensor>& q) {
    Params m = proto;
    ParamSet ms = m.param_set();
    for (size_t i = 0; i < ms.size(); ++i) ms.tensor(i) = q[i];
    return loss_fn(m);
  };
  return finite_difference_check(fn, init, eps);
}

struct GtsModel {
  SeriesEncoderParams enc;
  DcrnnParams fc;
  ParamSet param_set() {
    ParamSet ps;
    ps.merge(enc.param_set(), "enc_");
    ps.merge(fc.param_set(), "fc_");
    return ps;
  }
};

struct MtgnnModel {
  NodePairEmbeddings emb;
  Tensor w1, w2;
  MtgnnForecasterParams fc;
  ParamSet param_set() {
    ParamSet ps;
    ps.add("e1", emb.e1);
    ps.add("e2", emb.e2);
    ps.add("w1", w1);
    ps.add("w2", w2);
    ps.merge(fc.param_set(), "fc_");
    return ps;
  }
};

struct NriModel {
  NriEncoderParams enc;
  NriDecoderParams dec;
  ParamSet param_set() {
    ParamSet ps;
    ps.merge(enc.param_set(), "enc_");
    ps.merge(dec.param_set(), "dec_");
    return ps;
  }
};

// Criterion 1: end-to-end gradients of all six models on 4-node instances.
bool criterion_1(std::string& detail) {
  RngStream rng(41);
  const int n = 4, w = 8, horizon = 2;
  double worst = 0.0;
  std::string worst_model;
  auto note = [&](const std::string& name, double err) {
    if (err > worst) {
      worst = err;
      worst_model = name;
    }
  };

  {
    GtsModel m;
    m.enc = SeriesEncoderParams::init(20, 3, rng, 2, 2, 4, 2, 4);
    m.fc = DcrnnParams::init(w, 3, rng);
    Tensor series = randn({n, 20}, rng);
    Tensor win = randn({2, n, w}, rng);
    Tensor target = randn({2, n, horizon}, rng);
    auto loss = [&](GtsModel& q) {
      Tensor theta = sigmoid(gts_edge_logits(gts_encode_series(series, q.enc), q.enc));
      return mean_all(abs_op(sub(dcrnn_forecast(win, theta, q.fc, horizon), target)));
    };
    note("gts", model_fd(m, loss, 1e-5));
  }
  {
    MtgnnModel m;
    m.emb.e1 = randn({n, 3}, rng, 0.5);
    m.emb.e2 = randn({n, 3}, rng, 0.5);
    m.w1 = randn({3, 3}, rng, 0.5);
    m.w2 = randn({3, 3}, rng, 0.5);
    // The inception stack's receptive field (13) exceeds the shared window 8;
    // this model alone runs at its minimum window 14.
    m.fc = MtgnnForecasterParams::init(14, horizon, rng, 2);
    Tensor win = randn({1, n, 14}, rng);
    Tensor target = randn({1, n, horizon}, rng);
    auto loss = [&](MtgnnModel& q) {
      Tensor A = mtgnn_adjacency(q.emb, q.w1, q.w2, 2).adjacency.weights;
      return mean_all(abs_op(sub(mtgnn_forecast(win, A, q.fc), target)));
    };
    note("mtgnn", model_fd(m, loss, 1e-5));
  }
  {
    auto m = GdnForecasterParams::init(n, w, 3, horizon, rng, 4);
    // The kNN selection is piecewise constant; redraw the embedding until
    // every neighbor margin clears the probe step, so the difference quotient
    // never crosses a selection boundary.
    auto knn_margin = [&](const Tensor& e) {
      double margin = 1e300;
      for (int i = 0; i < n; ++i) {
        std::vector<double> sims;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          double dot = 0, ni = 0, nj = 0;
          for (int c = 0; c < 3; ++c) {
            dot += e(i, c) * e(j, c);
            ni += e(i, c) * e(i, c);
            nj += e(j, c) * e(j, c);
          }
          sims.push_back(dot / std::sqrt(ni * nj));
        }
        std::sort(sims.begin(), sims.end(), std::greater<>());
        margin = std::min(margin, sims[1] - sims[2]);
      }
      return margin;
    };
    while (knn_margin(m.embed) < 1e-2) m.embed = randn({n, 3}, rng);
    // Zero-initialized biases can park a ReLU pre-activation exactly on its
    // kink (a fully clipped node feeds the MLP a zero row); nudge them off.
    m.mlp_b1 = randn({4}, rng, 0.1);
    m.mlp_b2 = randn({horizon}, rng, 0.1);
    Tensor win = randn({2, n, w}, rng);
    Tensor target = randn({2, n, horizon}, rng);
    auto loss = [&](GdnForecasterParams& q) {
      Tensor A = gdn_knn_adjacency(q.embed, 2).adjacency.weights;
      return mean_all(abs_op(sub(gdn_forecast(win, A, q), target)));
    };
    note("gdn", model_fd(m, loss, 1e-5));
  }
  {
    NriModel m;
    m.enc = NriEncoderParams::init(w, 4, 2, rng);
    m.dec = NriDecoderParams::init(2, 3, rng);
    Tensor win = randn({n, w}, rng);
    Tensor target = randn({n, horizon}, rng);
    auto loss = [&](NriModel& q) {
      Tensor post = nri_edge_posterior(nri_encode_window(win, q.enc));
      return mean_all(abs_op(sub(nri_decode(win, post, q.dec, horizon), target)));
    };
    note("nri", model_fd(m, loss, 1e-5));
  }
  {
    auto m = JointLstmParams::init(n, w, 4, rng);
    Tensor win = randn({2, n, w}, rng);
    Tensor target = randn({2, n, horizon}, rng);
    auto loss = [&](JointLstmParams& q) {
      return mean_all(abs_op(sub(lstm_forecast(win, q, horizon), target)));
    };
    note("lstm", model_fd(m, loss, 1e-5));
  }
  {
    auto m = LstmUParams::init(n, w, 3, rng);
    Tensor win = randn({2, n, w}, rng);
    Tensor target = randn({2, n, horizon}, rng);
    auto loss = [&](LstmUParams& q) {
      return mean_all(abs_op(sub(lstm_u_forecast(win, q, horizon), target)));
    };
    note("lstm-u", model_fd(m, loss, 1e-5));
  }

  std::ostringstream os;
  os << "worst relative error " << worst << " (" << worst_model << "), tolerance " << kFdTolerance;
  detail = os.str();
  return worst < kFdTolerance;
}

// Criterion 2: diffusion conv against an independent dense evaluation,
// 50 random 5-node instances.
bool criterion_2(std::string& detail) {
  RngStream rng(42);
  const int n = 5, din = 3, dout = 2, K = 2;
  double max_diff = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto w = DiffusionWeights::init(din, dout, K, rng);
    Tensor Z = randn({n, din}, rng);
    Tensor A = rand_positive({n, n}, rng);
    for (int i = 0; i < n; ++i) {
      // Sparsify and occasionally empty a row/column.
      for (int j = 0; j < n; ++j) {
        if (rng.uniform() < 0.4) A.mutable_data()[static_cast<size_t>(i) * n + j] = 0.0;
      }
    }
    Tensor got = graph_diffusion_conv(Z, A, w, K);

    // Dense reference: P_out = D_out^-1 A (rows / out-degree), P_in = D_in^-1 A
    // (row i / in-degree of i, i.e. column sum at i); zero degree maps to zero.
    auto normalized = [&](bool in_mode) {
      std::vector<double> P(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) {
        double deg = 0;
        for (int j = 0; j < n; ++j) deg += in_mode ? A(j, i) : A(i, j);
        if (deg == 0.0) continue;
        for (int j = 0; j < n; ++j) P[static_cast<size_t>(i) * n + j] = A(i, j) / deg;
      }
      return P;
    };
    auto apply_pow = [&](const std::vector<double>& P, int k) {
      std::vector<double> X(Z.data());
      for (int rep = 0; rep < k; ++rep) {
        std::vector<double> Y(static_cast<size_t>(n) * din, 0.0);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            for (int c = 0; c < din; ++c) {
              Y[static_cast<size_t>(i) * din + c] += P[static_cast<size_t>(i) * n + j] * X[static_cast<size_t>(j) * din + c];
            }
          }
        }
        X = Y;
      }
      return X;
    };
    std::vector<double> want(static_cast<size_t>(n) * dout, 0.0);
    const auto Po = normalized(false), Pi = normalized(true);
    for (int k = 1; k <= K; ++k) {
      const auto Xo = apply_pow(Po, k), Xi = apply_pow(Pi, k);
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < dout; ++c) {
          double acc = 0;
          for (int m2 = 0; m2 < din; ++m2) {
            acc += Xo[static_cast<size_t>(i) * din + m2] * w.w_out[static_cast<size_t>(k - 1)](m2, c);
            acc += Xi[static_cast<size_t>(i) * din + m2] * w.w_in[static_cast<size_t>(k - 1)](m2, c);
          }
          want[static_cast<size_t>(i) * dout + c] += acc;
        }
      }
    }
    for (size_t i = 0; i < want.size(); ++i) {
      max_diff = std::max(max_diff, std::fabs(got.data()[i] - want[i]));
    }
  }
  std::ostringstream os;
  os << "max |diff| " << max_diff << " over 50 instances, tolerance " << kDenseConvTolerance;
  detail = os.str();
  return max_diff < kDenseConvTolerance;
}

// Criterion 3: MTGNN asymmetry and row-sparsity invariants, 100 draws.
bool criterion_3(std::string& detail) {
  RngStream rng(43);
  const int n = 8, d = 4, k = 3;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    NodePairEmbeddings emb;
    emb.e1 = randn({n, d}, rng);
    emb.e2 = randn({n, d}, rng);
    Tensor w1 = randn({d, d}, rng);
    Tensor w2 = randn({d, d}, rng);
    Tensor A = mtgnn_adjacency(emb, w1, w2, k).adjacency.weights;
    for (int i = 0; i < n; ++i) {
      int nnz = 0;
      for (int j = 0; j < n; ++j) {
        if (A(i, j) > 0.0) {
          ++nnz;
          if (A(j, i) != 0.0) ++violations;
        }
      }
      if (nnz > k) ++violations;
    }
  }
  std::ostringstream os;
  os << violations << " violations over 100 draws (asymmetry and <= K nonzeros per row)";
  detail = os.str();
  return violations == 0;
}

// Criterion 4: sampling statistics for the Bernoulli relaxation and the
// random baseline graph.
bool criterion_4(std::string& detail) {
  RngStream rng(44);
  Tensor half = Tensor::full({100, 100}, 0.5);
  double ones = 0;
  Tensor draw = gumbel_bernoulli(half, 0.5, rng);
  for (double v : draw.data()) ones += v;
  const double freq = ones / 10000.0;

  const int n = 10, draws = 200;
  const double p = 3.0 / 9.0;
  double edges = 0;
  for (int t = 0; t < draws; ++t) {
    Tensor g = er_random_graph(n, rng).weights;
    for (double v : g.data()) edges += v;
  }
  const double mean_edges = edges / draws;
  const double expect = 90.0 * p;
  const double sigma = std::sqrt(90.0 * p * (1.0 - p) / draws);
  const double dev = std::fabs(mean_edges - expect);

  std::ostringstream os;
  os << "bernoulli frequency " << freq << " (want [0.48, 0.52]); mean edges " << mean_edges
     << " vs " << expect << ", |dev| " << dev << " <= 4 sigma " << 4.0 * sigma;
  detail = os.str();
  return freq >= 0.48 && freq <= 0.52 && dev <= 4.0 * sigma;
}

// Criterion 5: PPR row sums and the 200-term Neumann series.
bool criterion_5(std::string& detail) {
  RngStream rng(45);
  const int n = 10;
  const double r = 0.15;
  double worst_row = 0.0, worst_neumann = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Tensor A = Tensor::zeros({n, n});
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && rng.bernoulli(0.3)) {
          A.mutable_data()[static_cast<size_t>(i) * n + j] = rng.uniform(0.2, 1.0);
        }
      }
    }
    Tensor S = ppr_matrix(A, r);
    for (int i = 0; i < n; ++i) {
      double row = 0;
      for (int j = 0; j < n; ++j) row += S(i, j);
      worst_row = std::max(worst_row, std::fabs(row - 1.0));
    }
    // Neumann: S = r sum_k (1-r)^k P^k with the same row normalization.
    std::vector<double> P(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      double deg = 0;
      for (int j = 0; j < n; ++j) deg += A(i, j);
      if (deg == 0.0) {
        P[static_cast<size_t>(i) * n + i] = 1.0;
      } else {
        for (int j = 0; j < n; ++j) P[static_cast<size_t>(i) * n + j] = A(i, j) / deg;
      }
    }
    std::vector<double> term(static_cast<size_t>(n) * n, 0.0), acc(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) term[static_cast<size_t>(i) * n + i] = 1.0;  // P^0
    for (int k = 0; k <= 200; ++k) {
      const double w = r * std::pow(1.0 - r, k);
      for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * term[i];
      std::vector<double> next(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
          const double t = term[static_cast<size_t>(i) * n + m];
          if (t == 0.0) continue;
          for (int j = 0; j < n; ++j) next[static_cast<size_t>(i) * n + j] += t * P[static_cast<size_t>(m) * n + j];
        }
      }
      term = next;
    }
    for (size_t i = 0; i < acc.size(); ++i) {
      worst_neumann = std::max(worst_neumann, std::fabs(acc[i] - S.data()[i]));
    }
  }
  std::ostringstream os;
  os << "max |row sum - 1| " << worst_row << " (tol " << kPprRowSumTolerance
     << "); max Neumann diff " << worst_neumann << " (tol " << kPprNeumannTolerance << ")";
  detail = os.str();
  return worst_row < kPprRowSumTolerance && worst_neumann < kPprNeumannTolerance;
}

GeneratedDataset desk_diffusion() {
  DiffusionDatasetConfig cfg;
  cfg.nodes = 30;
  cfg.steps = 5000;
  cfg.seed = 100;
  return diffusion_dataset(cfg);
}

std::optional<double> seed_mean(const ExperimentConfig& base, int horizon, const Tensor& series,
                                const AdjacencyMatrix* gt) {
  std::vector<std::optional<double>> maes;
  for (int s = 0; s < kDeskSeeds; ++s) {
    ExperimentConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(s);
    TrainOutput out = train_model(cfg, series, gt);
    maes.push_back(out.record.test_mae.at(horizon));
  }
  return mean_and_sem(maes, nullptr);
}

// Criterion 6: ground-truth graph beats no graph on desk-scale diffusion
// data with the recurrent diffusion forecaster.
bool criterion_6(std::string& detail) {
  GeneratedDataset ds = desk_diffusion();
  ExperimentConfig base;
  base.model = ModelKind::kGts;
  base.dcrnn_hidden = 16;
  base.max_epochs = 3;

  base.graph_source = GraphMode::kGroundTruth;
  auto gt_mae = seed_mean(base, 12, ds.series, &ds.ground_truth);
  base.graph_source = GraphMode::kNone;
  auto none_mae = seed_mean(base, 12, ds.series, &ds.ground_truth);
  if (!gt_mae || !none_mae) {
    detail = "undefined MAE";
    return false;
  }
  const double gain = 100.0 * (*none_mae - *gt_mae) / *none_mae;
  std::ostringstream os;
  os << "MAE@12 ground-truth " << *gt_mae << " vs none " << *none_mae << "; improvement " << gain
     << "% (need >= " << kDiffusionGapPct << "%)";
  detail = os.str();
  return gain >= kDiffusionGapPct;
}

// Criterion 7: a graph-based model outranks the univariate baseline at
// horizon 3 on desk-scale DAG data. Noise dominates the series so that
// the propagated parent noise, visible only through the graph, carries
// the short-horizon signal.
bool criterion_7(std::string& detail) {
  DagDatasetConfig dcfg;
  dcfg.nodes = 30;
  dcfg.steps = 5000;
  dcfg.edge_prob = 0.1;
  dcfg.noise = 4.0;
  dcfg.seed = 100;
  GeneratedDataset ds = dag_dataset(dcfg);

  ExperimentConfig base;
  base.model = ModelKind::kGdn;
  base.embed_dim = 32;
  base.graph_source = GraphMode::kLearned;
  auto gdn_learned = seed_mean(base, 3, ds.series, &ds.ground_truth);
  base.graph_source = GraphMode::kGroundTruth;
  auto gdn_gt = seed_mean(base, 3, ds.series, &ds.ground_truth);

  base.model = ModelKind::kLstmU;
  base.graph_source = GraphMode::kNone;
  base.lstm_hidden = 32;
  // The per-node LSTM reaches its validation-best within ten epochs here;
  // the attention model keeps the full budget since its epochs are cheap.
  base.max_epochs = 10;
  auto lstm_mae = seed_mean(base, 3, ds.series, &ds.ground_truth);
  if (!gdn_learned || !gdn_gt || !lstm_mae) {
    detail = "undefined MAE";
    return false;
  }
  const double best = std::min(*gdn_learned, *gdn_gt);
  std::ostringstream os;
  os << "MAE@3 best graph model " << best << " (gdn learned " << *gdn_learned
     << ", gdn ground-truth " << *gdn_gt << ") vs lstm-u " << *lstm_mae;
  detail = os.str();
  return best < *lstm_mae;
}

// Criterion 8: ablation table mechanics and the signed-delta convention.
bool criterion_8(std::string& detail) {
  const bool arithmetic = *percentage_delta(4.0, 4.0) == 0.0 &&
                          std::fabs(*percentage_delta(3.6, 4.0) + 10.0) < 1e-12;

  DiffusionDatasetConfig dcfg;
  dcfg.nodes = 5;
  dcfg.steps = 250;
  dcfg.clusters = 1;
  dcfg.seed = 8;
  GeneratedDataset ds = diffusion_dataset(dcfg);
  ExperimentConfig cfg;
  cfg.model = ModelKind::kGdn;
  cfg.graph_source = GraphMode::kLearned;
  cfg.max_epochs = 1;
  cfg.embed_dim = 4;
  auto rows = run_ablation_suite(cfg, {GraphMode::kLearned, GraphMode::kGroundTruth,
                                       GraphMode::kRandom, GraphMode::kNone},
                                 2, ds.series, &ds.ground_truth);
  bool learned_zero = false, all_defined = true;
  for (const auto& row : rows) {
    if (row.mode == GraphMode::kLearned) learned_zero = row.delta_pct && *row.delta_pct == 0.0;
    if (!row.mean_mae || !row.delta_pct) all_defined = false;
  }
  std::ostringstream os;
  os << "delta arithmetic " << (arithmetic ? "ok" : "bad") << "; learned-row delta exactly 0: "
     << (learned_zero ? "yes" : "no") << "; all rows defined: " << (all_defined ? "yes" : "no");
  detail = os.str();
  return arithmetic && learned_zero && all_defined;
}

// Criterion 9: correlation tooling plus the regularized series learner's
// stronger ground-truth alignment.
bool criterion_9(std::string& detail) {
  RngStream rng(49);
  Tensor a = randn({6, 6}, rng);
  Tensor neg = Tensor::zeros({6, 6});
  for (size_t i = 0; i < a.data().size(); ++i) neg.mutable_data()[i] = -a.data()[i];
  const bool tooling = std::fabs(*pearson_offdiag(a, a) - 1.0) < 1e-12 &&
                       std::fabs(*pearson_offdiag(a, neg) + 1.0) < 1e-12;
  if (!tooling) {
    detail = "identity/negation correlation oracle failed";
    return false;
  }

  GeneratedDataset ds = desk_diffusion();
  ExperimentConfig base;
  base.model = ModelKind::kGts;
  base.graph_source = GraphMode::kLearned;
  base.dcrnn_hidden = 16;
  base.embed_dim = 16;
  base.max_epochs = 2;
  Tensor gt = ds.ground_truth.weights;

  auto mean_gt_corr = [&](double lambda) {
    std::vector<Tensor> scores;
    for (int s = 0; s < kDeskSeeds; ++s) {
      ExperimentConfig cfg = base;
      cfg.lambda_reg = lambda;
      cfg.seed = static_cast<std::uint64_t>(s);
      TrainOutput out = train_model(cfg, ds.series, &ds.ground_truth);
      scores.push_back(out.record.edge_scores);
    }
    return correlate_edge_scores(scores, &gt).mean_gt;
  };
  auto plain = mean_gt_corr(0.0);
  auto reg = mean_gt_corr(1.0);
  if (!plain || !reg) {
    detail = "undefined ground-truth correlation";
    return false;
  }
  std::ostringstream os;
  os << "identity 1.0 and negation -1.0 ok; mean GT correlation lambda=1 " << *reg
     << " vs lambda=0 " << *plain;
  detail = os.str();
  return *reg > *plain;
}

// Criterion 10: bit-identical reruns and run-record persistence.
bool criterion_10(std::string& detail) {
  DiffusionDatasetConfig dcfg;
  dcfg.nodes = 6;
  dcfg.steps = 300;
  dcfg.clusters = 2;
  dcfg.seed = 10;
  GeneratedDataset ds = diffusion_dataset(dcfg);
  ExperimentConfig cfg;
  cfg.model = ModelKind::kGts;
  cfg.graph_source = GraphMode::kLearned;
  cfg.max_epochs = 2;
  cfg.dcrnn_hidden = 4;
  cfg.embed_dim = 4;
  cfg.seed = 3;

  TrainOutput a = train_model(cfg, ds.series, &ds.ground_truth);
  TrainOutput b = train_model(cfg, ds.series, &ds.ground_truth);
  const bool identical = a.record.test_mae == b.record.test_mae &&
                         a.record.best_val_mae == b.record.best_val_mae &&
                         a.record.edge_scores.data() == b.record.edge_scores.data() &&
                         a.record.adjacency.data() == b.record.adjacency.data();

  const std::string dir =
      (std::filesystem::temp_directory_path() / "lgf_acceptance_record").string();
  std::filesystem::remove_all(dir);
  ParamSet ps = a.runtime->param_set();
  save_run_record(dir, a.record, ps);
  RunRecord back = load_run_record(dir);
  const bool roundtrip = back.config.snapshot() == cfg.snapshot() &&
                         back.test_mae == a.record.test_mae &&
                         back.edge_scores.data() == a.record.edge_scores.data() &&
                         back.adjacency.data() == a.record.adjacency.data();
  std::ostringstream os;
  os << "rerun bit-identical: " << (identical ? "yes" : "no")
     << "; record round-trip: " << (roundtrip ? "yes" : "no");
  detail = os.str();
  return identical && roundtrip;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1..10>\n";
    return 2;
  }
  const int c = std::atoi(argv[1]);
  bool (*criteria[])(std::string&) = {criterion_1, criterion_2, criterion_3, criterion_4,
                                      criterion_5, criterion_6, criterion_7, criterion_8,
                                      criterion_9, criterion_10};
  if (c < 1 || c > 10) {
    std::cerr << "usage: acceptance <criterion 1..10>\n";
    return 2;
  }
  std::string detail;
  bool ok = false;
  try {
    ok = criteria[c - 1](detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::cout << "criterion " << c << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
  return ok ? 0 : 1;
}
