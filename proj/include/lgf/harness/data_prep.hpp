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

#ifndef LGF_HARNESS_DATA_PREP_HPP_
#define LGF_HARNESS_DATA_PREP_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/tensor.hpp"

namespace lgf {

/// Per-node affine scaling fit on the training split only:
/// normalized = (x - offset) / scale.
struct Normalizer {
  std::string kind;  // zscore | minmax01
  std::vector<double> offset, scale;

  Tensor normalize(const Tensor& series) const {
    const int n = series.dim(0), T = series.dim(1);
    Tensor out = Tensor::zeros({n, T});
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < T; ++t) {
        out.mutable_data()[static_cast<size_t>(i) * T + t] =
            (series(i, t) - offset[static_cast<size_t>(i)]) / scale[static_cast<size_t>(i)];
      }
    }
    return out;
  }

  double denormalize_value(int node, double v) const {
    return v * scale[static_cast<size_t>(node)] + offset[static_cast<size_t>(node)];
  }

  Tensor denormalize(const Tensor& series) const {
    const int n = series.dim(0), T = series.dim(1);
    Tensor out = Tensor::zeros({n, T});
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < T; ++t) {
        out.mutable_data()[static_cast<size_t>(i) * T + t] = denormalize_value(i, series(i, t));
      }
    }
    return out;
  }
};

/// Degenerate nodes fall back to scale 1 (constant under zscore, flat range
/// under minmax01).
inline Normalizer fit_normalizer(const Tensor& series, int t_train, const std::string& kind) {
  check_shape(series.ndim() == 2, "fit_normalizer: need [N, T]");
  if (t_train < 1 || t_train > series.dim(1)) {
    throw std::invalid_argument("fit_normalizer: training split length out of range");
  }
  if (kind != "zscore" && kind != "minmax01") {
    throw std::invalid_argument("fit_normalizer: unknown normalization `" + kind + "`");
  }
  const int n = series.dim(0);
  Normalizer norm;
  norm.kind = kind;
  norm.offset.resize(static_cast<size_t>(n));
  norm.scale.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (kind == "zscore") {
      double mean = 0;
      for (int t = 0; t < t_train; ++t) mean += series(i, t);
      mean /= t_train;
      double var = 0;
      for (int t = 0; t < t_train; ++t) var += (series(i, t) - mean) * (series(i, t) - mean);
      var /= t_train;
      norm.offset[static_cast<size_t>(i)] = mean;
      norm.scale[static_cast<size_t>(i)] = var > 0 ? std::sqrt(var) : 1.0;
    } else {
      double lo = series(i, 0), hi = series(i, 0);
      for (int t = 0; t < t_train; ++t) {
        lo = std::min(lo, series(i, t));
        hi = std::max(hi, series(i, t));
      }
      norm.offset[static_cast<size_t>(i)] = lo;
      norm.scale[static_cast<size_t>(i)] = hi > lo ? hi - lo : 1.0;
    }
  }
  return norm;
}

struct SplitBounds {
  int train_end = 0;  // [0, train_end) is train
  int val_end = 0;    // [train_end, val_end) is val, rest is test
};

inline SplitBounds chronological_splits(int t_total, double train_fraction, double val_fraction) {
  if (!(train_fraction > 0 && val_fraction >= 0 && train_fraction + val_fraction < 1.0)) {
    throw std::invalid_argument("chronological_splits: invalid fractions");
  }
  SplitBounds b;
  // The epsilon keeps exact fractions exact under floating point (0.7 + 0.1
  // times 1000 must floor to 800, not 799).
  b.train_end = static_cast<int>(std::floor(t_total * train_fraction + 1e-9));
  b.val_end = static_cast<int>(std::floor(t_total * (train_fraction + val_fraction) + 1e-9));
  return b;
}

/// Number of stride-1 windows of total span w + horizon inside a segment of
/// length len.
inline int window_count(int len, int w, int horizon) {
  return std::max(0, len - w - horizon + 1);
}

struct WindowSet {
  std::vector<int> train_starts, val_starts, test_starts;
};

/// Window start offsets per split; a window [s, s + w + horizon) never
/// crosses a split boundary.
inline WindowSet make_windows(int t_total, int w, int horizon, const SplitBounds& b) {
  if (w < 1 || horizon < 1) throw std::invalid_argument("make_windows: w and horizon must be positive");
  if (t_total < w + horizon) {
    throw std::invalid_argument("make_windows: series of length " + std::to_string(t_total) +
                                " is shorter than window + horizon = " + std::to_string(w + horizon));
  }
  WindowSet ws;
  auto fill = [&](int begin, int end, std::vector<int>& out) {
    for (int s = begin; s + w + horizon <= end; ++s) out.push_back(s);
  };
  fill(0, b.train_end, ws.train_starts);
  fill(b.train_end, b.val_end, ws.val_starts);
  fill(b.val_end, t_total, ws.test_starts);
  return ws;
}

struct ForecastBatch {
  Tensor inputs;       // [B, N, w] normalized
  Tensor targets;      // [B, N, h] normalized
  Tensor raw_targets;  // [B, N, h] original scale
  Tensor mask;         // [B, N, h] 1 = keep, 0 = ignore
};

/// Assembles one batch from window starts. The mask zeroes entries whose
/// original-scale target is exactly 0 when masking is enabled.
inline ForecastBatch make_batch(const Tensor& normalized, const Tensor& raw,
                                const std::vector<int>& starts, int w, int horizon,
                                bool mask_zero_targets) {
  const int B = static_cast<int>(starts.size());
  const int n = normalized.dim(0);
  ForecastBatch batch;
  batch.inputs = Tensor::zeros({B, n, w});
  batch.targets = Tensor::zeros({B, n, horizon});
  batch.raw_targets = Tensor::zeros({B, n, horizon});
  batch.mask = Tensor::full({B, n, horizon}, 1.0);
  for (int bi = 0; bi < B; ++bi) {
    const int s = starts[static_cast<size_t>(bi)];
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < w; ++t) {
        batch.inputs.mutable_data()[(static_cast<size_t>(bi) * n + i) * w + t] = normalized(i, s + t);
      }
      for (int h = 0; h < horizon; ++h) {
        const size_t idx = (static_cast<size_t>(bi) * n + i) * horizon + h;
        batch.targets.mutable_data()[idx] = normalized(i, s + w + h);
        batch.raw_targets.mutable_data()[idx] = raw(i, s + w + h);
        if (mask_zero_targets && raw(i, s + w + h) == 0.0) batch.mask.mutable_data()[idx] = 0.0;
      }
    }
  }
  return batch;
}

inline std::vector<std::vector<int>> chunk_starts(const std::vector<int>& starts, int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("chunk_starts: batch size must be positive");
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < starts.size(); i += static_cast<size_t>(batch_size)) {
    out.emplace_back(starts.begin() + static_cast<std::ptrdiff_t>(i),
                     starts.begin() + static_cast<std::ptrdiff_t>(std::min(i + batch_size, starts.size())));
  }
  return out;
}

}  // namespace lgf

#endif  // LGF_HARNESS_DATA_PREP_HPP_
