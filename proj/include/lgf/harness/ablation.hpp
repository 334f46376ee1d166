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

#ifndef LGF_HARNESS_ABLATION_HPP_
#define LGF_HARNESS_ABLATION_HPP_

#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/harness/train.hpp"

namespace lgf {

/// Signed percentage change of a mode's MAE against the learned-graph
/// baseline; negative means the mode improved on it.
inline std::optional<double> percentage_delta(const std::optional<double>& mode_mae,
                                              const std::optional<double>& learned_mae) {
  if (!mode_mae || !learned_mae || *learned_mae == 0.0) return std::nullopt;
  return 100.0 * (*mode_mae - *learned_mae) / *learned_mae;
}

struct AblationRow {
  GraphMode mode = GraphMode::kLearned;
  std::vector<std::optional<double>> run_mae;  // one per repeat
  std::optional<double> mean_mae;
  std::optional<double> sem;       // standard error of the mean over repeats
  std::optional<double> delta_pct; // against the learned row
};

inline std::optional<double> mean_and_sem(const std::vector<std::optional<double>>& xs,
                                          std::optional<double>* sem) {
  double s = 0;
  int c = 0;
  for (const auto& x : xs) {
    if (x) {
      s += *x;
      ++c;
    }
  }
  if (sem) *sem = std::nullopt;
  if (c == 0) return std::nullopt;
  const double mean = s / c;
  if (sem && c >= 2) {
    double var = 0;
    for (const auto& x : xs) {
      if (x) var += (*x - mean) * (*x - mean);
    }
    var /= (c - 1);
    *sem = std::sqrt(var / c);
  }
  return mean;
}

/// Trains `repeats` seeds per graph mode, reports mean test MAE at the
/// largest reported horizon plus the percentage delta against the learned
/// mode. When `out_dir` is non-empty each run record is saved under
/// `out_dir/<mode>-seed<k>`.
inline std::vector<AblationRow> run_ablation_suite(const ExperimentConfig& base_cfg,
                                                   const std::vector<GraphMode>& modes,
                                                   int repeats, const Tensor& series,
                                                   const AdjacencyMatrix* ground_truth,
                                                   const std::string& out_dir = "") {
  if (repeats < 1) throw std::invalid_argument("run_ablation_suite: repeats must be positive");
  if (modes.empty()) throw std::invalid_argument("run_ablation_suite: no modes given");
  const int report_h = report_horizons(base_cfg.horizon).back();
  std::vector<AblationRow> rows;
  for (GraphMode mode : modes) {
    AblationRow row;
    row.mode = mode;
    for (int r = 0; r < repeats; ++r) {
      ExperimentConfig cfg = base_cfg;
      cfg.graph_source = mode;
      cfg.seed = static_cast<std::uint64_t>(r);
      TrainOutput out = train_model(cfg, series, ground_truth);
      row.run_mae.push_back(out.record.test_mae.at(report_h));
      if (!out_dir.empty()) {
        ParamSet ps = out.runtime->param_set();
        save_run_record(out_dir + "/" + to_string(mode) + "-seed" + std::to_string(r),
                        out.record, ps);
      }
    }
    row.mean_mae = mean_and_sem(row.run_mae, &row.sem);
    rows.push_back(row);
  }
  std::optional<double> learned_mean;
  for (const auto& row : rows) {
    if (row.mode == GraphMode::kLearned) learned_mean = row.mean_mae;
  }
  for (auto& row : rows) row.delta_pct = percentage_delta(row.mean_mae, learned_mean);
  return rows;
}

/// Text table: one `mode  mae (+/- sem)  signed-percent` line per mode.
inline std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(4) << std::fixed;
  os << "graph-source      mae@h        sem      delta\n";
  for (const auto& row : rows) {
    os << std::left << std::setw(14) << to_string(row.mode) << std::right;
    auto cell = [&os](const std::optional<double>& v, int width) {
      os << std::setw(width);
      if (v) {
        os << *v;
      } else {
        os << "undef";
      }
    };
    cell(row.mean_mae, 11);
    cell(row.sem, 11);
    if (row.delta_pct) {
      os << std::setw(10) << std::showpos << *row.delta_pct << std::noshowpos << "%";
    } else {
      os << std::setw(10) << "undef" << " ";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace lgf

#endif  // LGF_HARNESS_ABLATION_HPP_
