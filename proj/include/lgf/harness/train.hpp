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

#ifndef LGF_HARNESS_TRAIN_HPP_
#define LGF_HARNESS_TRAIN_HPP_

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgf/core/adam.hpp"
#include "lgf/harness/data_prep.hpp"
#include "lgf/harness/metrics.hpp"
#include "lgf/harness/model_runtime.hpp"
#include "lgf/harness/run_record.hpp"

namespace lgf {

/// Horizons reported in run records: {3, 6, 12} clipped to the configured
/// horizon, or just the horizon itself when it is under 3.
inline std::vector<int> report_horizons(int horizon) {
  std::vector<int> hs;
  for (int h : {3, 6, 12}) {
    if (h <= horizon) hs.push_back(h);
  }
  if (hs.empty()) hs.push_back(horizon);
  return hs;
}

/// Parameter tensors keep tape/node markers after watch_all; clear them so a
/// later pass does not record onto a destroyed tape.
inline void detach_params(ParamSet& params) {
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& t = params.tensor(i);
    t.tape = nullptr;
    t.node = -1;
    t.requires_grad = false;
  }
}

struct SplitEval {
  std::map<int, std::optional<double>> per_horizon;
  std::optional<double> overall;  // all horizon steps pooled
};

/// Original-scale masked MAE of a model over the windows starting at
/// `starts`, batched, without touching any tape.
inline SplitEval evaluate_split(ModelRuntime& rt, const Tensor& normalized, const Tensor& raw,
                                const std::vector<int>& starts, const Normalizer& norm,
                                const std::vector<int>& horizons) {
  const ExperimentConfig& cfg = rt.config();
  std::vector<double> acc(horizons.size(), 0.0), cnt(horizons.size(), 0.0);
  double oacc = 0.0, ocnt = 0.0;
  std::vector<int> step_slot(static_cast<size_t>(cfg.horizon), -1);
  for (size_t hi = 0; hi < horizons.size(); ++hi) step_slot[static_cast<size_t>(horizons[hi] - 1)] = static_cast<int>(hi);
  RngStream unused(0);
  for (const auto& chunk : chunk_starts(starts, cfg.batch_size)) {
    ForecastBatch b =
        make_batch(normalized, raw, chunk, cfg.window, cfg.horizon, cfg.mask_zero_targets);
    Tensor pred = rt.forward(b.inputs, false, unused);
    const int B = b.raw_targets.dim(0), n = b.raw_targets.dim(1), h = b.raw_targets.dim(2);
    for (int bi = 0; bi < B; ++bi) {
      for (int i = 0; i < n; ++i) {
        for (int s = 0; s < h; ++s) {
          const size_t idx = (static_cast<size_t>(bi) * n + i) * h + s;
          if (b.mask.data()[idx] == 0.0) continue;
          const double p = norm.denormalize_value(i, pred.data()[idx]);
          const double err = std::fabs(p - b.raw_targets.data()[idx]);
          oacc += err;
          ocnt += 1;
          if (step_slot[static_cast<size_t>(s)] >= 0) {
            acc[static_cast<size_t>(step_slot[static_cast<size_t>(s)])] += err;
            cnt[static_cast<size_t>(step_slot[static_cast<size_t>(s)])] += 1;
          }
        }
      }
    }
  }
  SplitEval ev;
  for (size_t hi = 0; hi < horizons.size(); ++hi) {
    ev.per_horizon[horizons[hi]] =
        cnt[hi] > 0 ? std::optional<double>(acc[hi] / cnt[hi]) : std::nullopt;
  }
  ev.overall = ocnt > 0 ? std::optional<double>(oacc / ocnt) : std::nullopt;
  return ev;
}

struct TrainOutput {
  RunRecord record;
  std::unique_ptr<ModelRuntime> runtime;
  Normalizer normalizer;
};

/// Full training run: normalize on the training split, optimize masked MAE
/// with Adam, early-stop on validation MAE, restore the best parameters and
/// evaluate the test split on the original scale.
inline TrainOutput train_model(const ExperimentConfig& cfg, const Tensor& series,
                               const AdjacencyMatrix* ground_truth) {
  check_shape(series.ndim() == 2 && series.dim(0) >= 2, "train_model: need an [N>=2, T] series");
  const int n = series.dim(0), T = series.dim(1);
  const SplitBounds bounds = chronological_splits(T, cfg.train_fraction, cfg.val_fraction);
  const Normalizer norm = fit_normalizer(series, bounds.train_end, cfg.normalization);
  const Tensor normalized = norm.normalize(series);
  const WindowSet ws = make_windows(T, cfg.window, cfg.horizon, bounds);
  if (ws.train_starts.empty()) {
    throw std::invalid_argument("train_model: training split yields no windows");
  }

  Tensor train_slice = Tensor::zeros({n, bounds.train_end});
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < bounds.train_end; ++t) {
      train_slice.mutable_data()[static_cast<size_t>(i) * bounds.train_end + t] = normalized(i, t);
    }
  }

  RngStream base(cfg.seed);
  auto rt = ModelRuntime::create(cfg, n, train_slice, ground_truth, base);
  RngStream shuffle_rng = base.split(21);
  RngStream sample_rng = base.split(22);
  ParamSet params = rt->param_set();
  AdamState adam;
  adam.lr = cfg.lr;

  const std::vector<int>& stop_starts = ws.val_starts.empty() ? ws.train_starts : ws.val_starts;
  const std::vector<int> horizons = report_horizons(cfg.horizon);

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best_snapshot = params.snapshot();
  int bad_epochs = 0, epochs_run = 0;
  std::vector<int> order = ws.train_starts;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(shuffle_rng.uniform_int(static_cast<std::uint64_t>(i)));
      std::swap(order[i - 1], order[j]);
    }
    int batch_index = 0;
    for (const auto& chunk : chunk_starts(order, cfg.batch_size)) {
      ++batch_index;
      ForecastBatch b =
          make_batch(normalized, series, chunk, cfg.window, cfg.horizon, cfg.mask_zero_targets);
      if (mask_total(b.mask) == 0.0) continue;
      Tape tape;
      params.watch_all(tape);
      Tensor pred = rt->forward(b.inputs, true, sample_rng);
      Tensor loss = masked_mae_loss(pred, b.targets, b.mask);
      Tensor reg = rt->take_regularizer();
      if (reg.size() == 1) loss = add(loss, reg);
      if (!loss.all_finite()) {
        detach_params(params);
        throw std::runtime_error("train_model: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(batch_index) + " (model " +
                                 to_string(cfg.model) + ", graph " + to_string(cfg.graph_source) + ")");
      }
      tape.backward(loss);
      std::vector<Tensor> grads = params.grads(tape);
      detach_params(params);
      adam_step(params, grads, adam);
    }
    epochs_run = epoch;
    SplitEval val = evaluate_split(*rt, normalized, series, stop_starts, norm, horizons);
    const double v = val.overall ? *val.overall : std::numeric_limits<double>::infinity();
    if (v < best_val) {
      best_val = v;
      best_snapshot = params.snapshot();
      bad_epochs = 0;
    } else {
      ++bad_epochs;
      if (bad_epochs >= cfg.patience) break;
    }
  }
  params.restore(best_snapshot);

  TrainOutput out;
  out.normalizer = norm;
  out.record.config = cfg;
  out.record.epochs_run = epochs_run;
  if (best_val < std::numeric_limits<double>::infinity()) out.record.best_val_mae = best_val;
  SplitEval test = evaluate_split(*rt, normalized, series, ws.test_starts, norm, horizons);
  out.record.test_mae = test.per_horizon;
  out.record.edge_scores = rt->edge_score_matrix();
  out.record.adjacency = rt->eval_adjacency();
  out.runtime = std::move(rt);
  return out;
}

}  // namespace lgf

#endif  // LGF_HARNESS_TRAIN_HPP_
