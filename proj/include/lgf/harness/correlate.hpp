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

#ifndef LGF_HARNESS_CORRELATE_HPP_
#define LGF_HARNESS_CORRELATE_HPP_

#include <fstream>
#include <iomanip>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/harness/metrics.hpp"
#include "lgf/harness/model_runtime.hpp"

namespace lgf {

/// Pairwise and ground-truth Pearson statistics of edge-score matrices
/// across re-runs. Undefined correlations (zero variance) stay undefined and
/// are excluded from the means; a mean with no defined inputs is undefined.
struct CorrelationReport {
  std::vector<std::optional<double>> pairwise;          // unordered run pairs, (0,1),(0,2),...
  std::optional<double> mean_cross;
  std::vector<std::optional<double>> to_ground_truth;   // one per run
  std::optional<double> mean_gt;
};

inline std::optional<double> mean_defined(const std::vector<std::optional<double>>& xs) {
  double s = 0;
  int c = 0;
  for (const auto& x : xs) {
    if (x) {
      s += *x;
      ++c;
    }
  }
  if (c == 0) return std::nullopt;
  return s / c;
}

inline CorrelationReport correlate_edge_scores(const std::vector<Tensor>& scores,
                                               const Tensor* ground_truth) {
  if (scores.empty()) throw std::invalid_argument("correlate_edge_scores: no score matrices");
  const Shape& shape = scores.front().shape();
  for (const auto& s : scores) {
    if (s.shape() != shape) {
      throw std::invalid_argument("correlate_edge_scores: score matrices differ in shape");
    }
  }
  CorrelationReport rep;
  for (size_t i = 0; i < scores.size(); ++i) {
    for (size_t j = i + 1; j < scores.size(); ++j) {
      rep.pairwise.push_back(pearson_offdiag(scores[i], scores[j]));
    }
  }
  rep.mean_cross = mean_defined(rep.pairwise);
  if (ground_truth) {
    Tensor gt = binarize(*ground_truth);
    if (gt.shape() != shape) {
      throw std::invalid_argument("correlate_edge_scores: ground-truth shape mismatch");
    }
    for (const auto& s : scores) rep.to_ground_truth.push_back(pearson_offdiag(s, gt));
    rep.mean_gt = mean_defined(rep.to_ground_truth);
  }
  return rep;
}

inline void save_correlation_report(const std::string& path, const CorrelationReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write correlation report " + path);
  out << std::setprecision(17) << "metric,value\n";
  auto emit = [&out](const std::string& key, const std::optional<double>& v) {
    out << key << ",";
    if (v) {
      out << *v << "\n";
    } else {
      out << "undefined\n";
    }
  };
  emit("cross_mean", rep.mean_cross);
  emit("gt_mean", rep.mean_gt);
  for (size_t p = 0; p < rep.pairwise.size(); ++p) {
    emit("pair_" + std::to_string(p), rep.pairwise[p]);
  }
  for (size_t r = 0; r < rep.to_ground_truth.size(); ++r) {
    emit("run_" + std::to_string(r) + "_gt", rep.to_ground_truth[r]);
  }
}

}  // namespace lgf

#endif  // LGF_HARNESS_CORRELATE_HPP_
