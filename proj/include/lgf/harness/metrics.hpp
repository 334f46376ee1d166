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

#ifndef LGF_HARNESS_METRICS_HPP_
#define LGF_HARNESS_METRICS_HPP_

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lgf/core/ops.hpp"
#include "lgf/harness/data_prep.hpp"

namespace lgf {

/// Fraction of unmasked entries; 0 means the loss below is undefined.
inline double mask_total(const Tensor& mask) {
  double s = 0;
  for (double v : mask.data()) s += v;
  return s;
}

/// Differentiable masked mean absolute error (normalized scale). The caller
/// must skip batches whose mask is empty.
inline Tensor masked_mae_loss(const Tensor& pred, const Tensor& target, const Tensor& mask) {
  const double total = mask_total(mask);
  if (total == 0.0) throw std::invalid_argument("masked_mae_loss: fully masked batch");
  Tensor abs_err = mul(abs_op(sub(pred, target)), mask);
  return scale(sum_all(abs_err), 1.0 / total);
}

/// MAE at one horizon step (0-based) on the original scale; nullopt when
/// every target at that step is masked out.
inline std::optional<double> mae_at_step(const Tensor& pred_norm, const ForecastBatch& batch,
                                         const Normalizer& norm, int step) {
  const int B = batch.raw_targets.dim(0), n = batch.raw_targets.dim(1),
            h = batch.raw_targets.dim(2);
  if (step < 0 || step >= h) throw std::invalid_argument("mae_at_step: horizon step out of range");
  double acc = 0, count = 0;
  for (int b = 0; b < B; ++b) {
    for (int i = 0; i < n; ++i) {
      const size_t idx = (static_cast<size_t>(b) * n + i) * h + step;
      if (batch.mask.data()[idx] == 0.0) continue;
      const double p = norm.denormalize_value(i, pred_norm.data()[idx]);
      acc += std::fabs(p - batch.raw_targets.data()[idx]);
      count += 1;
    }
  }
  if (count == 0) return std::nullopt;
  return acc / count;
}

/// Accumulates original-scale MAE at several horizon steps across batches.
class MaeAccumulator {
 public:
  explicit MaeAccumulator(std::vector<int> horizons) : horizons_(std::move(horizons)) {
    acc_.assign(horizons_.size(), 0.0);
    count_.assign(horizons_.size(), 0.0);
  }

  void add(const Tensor& pred_norm, const ForecastBatch& batch, const Normalizer& norm) {
    const int B = batch.raw_targets.dim(0), n = batch.raw_targets.dim(1),
              h = batch.raw_targets.dim(2);
    for (size_t hi = 0; hi < horizons_.size(); ++hi) {
      const int step = horizons_[hi] - 1;
      if (step < 0 || step >= h) throw std::invalid_argument("MaeAccumulator: horizon out of range");
      for (int b = 0; b < B; ++b) {
        for (int i = 0; i < n; ++i) {
          const size_t idx = (static_cast<size_t>(b) * n + i) * h + step;
          if (batch.mask.data()[idx] == 0.0) continue;
          const double p = norm.denormalize_value(i, pred_norm.data()[idx]);
          acc_[hi] += std::fabs(p - batch.raw_targets.data()[idx]);
          count_[hi] += 1;
        }
      }
    }
  }

  /// Mean over every unmasked entry at each horizon; nullopt if fully masked.
  std::map<int, std::optional<double>> result() const {
    std::map<int, std::optional<double>> out;
    for (size_t hi = 0; hi < horizons_.size(); ++hi) {
      out[horizons_[hi]] = count_[hi] > 0 ? std::optional<double>(acc_[hi] / count_[hi]) : std::nullopt;
    }
    return out;
  }

 private:
  std::vector<int> horizons_;
  std::vector<double> acc_, count_;
};

/// Pearson correlation over the off-diagonal entries of two square matrices;
/// nullopt when either side has zero variance (undefined, never coerced).
inline std::optional<double> pearson_offdiag(const Tensor& a, const Tensor& b) {
  check_shape(a.ndim() == 2 && a.shape() == b.shape() && a.dim(0) == a.dim(1),
              "pearson_offdiag: need two equal square matrices");
  const int n = a.dim(0);
  if (n < 2) throw std::invalid_argument("pearson_offdiag: need at least 2 nodes");
  // A constant off-diagonal is zero-variance regardless of rounding residue
  // in the centered sums below.
  auto constant_offdiag = [n](const Tensor& m) {
    double first = m(0, 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && m(i, j) != first) return false;
      }
    }
    return true;
  };
  if (constant_offdiag(a) || constant_offdiag(b)) return std::nullopt;
  double ma = 0, mb = 0;
  const int m = n * (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      ma += a(i, j);
      mb += b(i, j);
    }
  }
  ma /= m;
  mb /= m;
  double cab = 0, ca = 0, cb = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      cab += (a(i, j) - ma) * (b(i, j) - mb);
      ca += (a(i, j) - ma) * (a(i, j) - ma);
      cb += (b(i, j) - mb) * (b(i, j) - mb);
    }
  }
  if (ca == 0.0 || cb == 0.0) return std::nullopt;
  return cab / std::sqrt(ca * cb);
}

}  // namespace lgf

#endif  // LGF_HARNESS_METRICS_HPP_
