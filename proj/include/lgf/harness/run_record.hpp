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

#ifndef LGF_HARNESS_RUN_RECORD_HPP_
#define LGF_HARNESS_RUN_RECORD_HPP_

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lgf/core/params.hpp"
#include "lgf/graph/adjacency.hpp"
#include "lgf/harness/config.hpp"

namespace lgf {

/// Everything one training run produces. Persists as a directory with
/// `config`, `metrics` (CSV horizon,mae), `edge_scores.csv`,
/// `adjacency.edges` and `params.bin` + `params.manifest`.
struct RunRecord {
  ExperimentConfig config;
  std::map<int, std::optional<double>> test_mae;
  std::optional<double> best_val_mae;
  int epochs_run = 0;
  Tensor edge_scores;  // [N, N]
  Tensor adjacency;    // [N, N]
};

inline void save_run_record(const std::string& dir, const RunRecord& r, const ParamSet& params) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir + "/config");
    if (!cfg) throw std::runtime_error("cannot write run record under " + dir);
    for (const auto& [k, v] : r.config.snapshot()) cfg << k << " = " << v << "\n";
    cfg << "# epochs_run = " << r.epochs_run << "\n";
    cfg << "# best_val_mae = ";
    if (r.best_val_mae) {
      cfg << std::setprecision(17) << *r.best_val_mae << "\n";
    } else {
      cfg << "undefined\n";
    }
  }
  {
    std::ofstream m(dir + "/metrics");
    if (!m) throw std::runtime_error("cannot write metrics under " + dir);
    m << std::setprecision(17) << "horizon,mae\n";
    for (const auto& [h, mae] : r.test_mae) {
      m << h << ",";
      if (mae) {
        m << *mae << "\n";
      } else {
        m << "undefined\n";
      }
    }
  }
  save_dense_csv(dir + "/edge_scores.csv", r.edge_scores);
  save_edge_list(dir + "/adjacency.edges",
                 AdjacencyMatrix{r.adjacency, true, GraphSource::kNone});
  params.save(dir + "/params.bin", dir + "/params.manifest");
}

inline std::map<int, std::optional<double>> load_run_metrics(const std::string& dir) {
  std::ifstream in(dir + "/metrics");
  if (!in) throw std::runtime_error("cannot open metrics under " + dir);
  std::string line;
  if (!std::getline(in, line) || line != "horizon,mae") {
    throw std::runtime_error(dir + "/metrics: bad header `" + line + "`");
  }
  std::map<int, std::optional<double>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(dir + "/metrics: malformed line `" + line + "`");
    const int h = std::stoi(line.substr(0, comma));
    const std::string v = line.substr(comma + 1);
    out[h] = v == "undefined" ? std::nullopt : std::optional<double>(std::stod(v));
  }
  return out;
}

/// Re-reads the non-parameter half of a record (enough for correlation and
/// ablation reporting).
inline RunRecord load_run_record(const std::string& dir) {
  RunRecord r;
  r.config = load_config_file(dir + "/config");
  r.test_mae = load_run_metrics(dir);
  r.edge_scores = load_dense_csv(dir + "/edge_scores.csv");
  r.adjacency = load_edge_list(dir + "/adjacency.edges", r.edge_scores.dim(0)).weights;
  return r;
}

}  // namespace lgf

#endif  // LGF_HARNESS_RUN_RECORD_HPP_
