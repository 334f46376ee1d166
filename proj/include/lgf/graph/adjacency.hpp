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

#ifndef LGF_GRAPH_ADJACENCY_HPP_
#define LGF_GRAPH_ADJACENCY_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/tensor.hpp"

namespace lgf {

enum class GraphSource {
  kLearnedMtgnn,
  kLearnedGdn,
  kLearnedGts,
  kLearnedNri,
  kGroundTruth,
  kRandom,
  kNone,
};

inline const char* to_string(GraphSource s) {
  switch (s) {
    case GraphSource::kLearnedMtgnn: return "learned-mtgnn";
    case GraphSource::kLearnedGdn: return "learned-gdn";
    case GraphSource::kLearnedGts: return "learned-gts";
    case GraphSource::kLearnedNri: return "learned-nri";
    case GraphSource::kGroundTruth: return "ground-truth";
    case GraphSource::kRandom: return "random";
    case GraphSource::kNone: return "none";
  }
  return "?";
}

/// N x N nonnegative edge-weight matrix. `weights` may live on a tape when
/// the graph was produced by a differentiable learner.
struct AdjacencyMatrix {
  Tensor weights;  // [N, N]
  bool directed = true;
  GraphSource source = GraphSource::kNone;

  int nodes() const { return weights.ndim() == 2 ? weights.dim(0) : 0; }

  static AdjacencyMatrix empty(int n, GraphSource source = GraphSource::kNone) {
    return AdjacencyMatrix{Tensor::zeros({n, n}), true, source};
  }
};

/// Continuous pre-sparsification / pre-sampling pairwise scores.
struct EdgeScores {
  Tensor scores;  // [N, N]
  std::string model_tag;
  std::uint64_t seed = 0;
};

/// Keeps the K largest entries per row (ties broken by lower column index),
/// zeroing the rest. Returns a 0/1 mask.
inline Tensor top_k_row_mask(const Tensor& scores, int k, bool skip_diagonal = true) {
  const int n = scores.dim(0);
  Tensor mask = Tensor::zeros({n, n});
  auto& m = mask.mutable_data();
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return scores(i, a) > scores(i, b);  // stable: lower index wins ties
    });
    int kept = 0;
    for (int j : order) {
      if (skip_diagonal && j == i) continue;
      if (kept == k) break;
      m[static_cast<size_t>(i) * n + j] = 1.0;
      ++kept;
    }
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Serialization. Graphs travel as edge-list text (`src dst weight` per line,
// 0-based ids); score matrices as dense CSV.
// ---------------------------------------------------------------------------

inline void save_edge_list(const std::string& path, const AdjacencyMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list " + path);
  out << std::setprecision(17);
  const int n = a.nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a.weights(i, j) != 0.0) out << i << " " << j << " " << a.weights(i, j) << "\n";
    }
  }
}

inline AdjacencyMatrix load_edge_list(const std::string& path, int n,
                                      GraphSource source = GraphSource::kGroundTruth) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path);
  AdjacencyMatrix a = AdjacencyMatrix::empty(n, source);
  auto& w = a.weights.mutable_data();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int src, dst;
    double weight;
    if (!(ls >> src >> dst >> weight)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed edge line");
    }
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": node id out of range");
    }
    w[static_cast<size_t>(src) * n + dst] = weight;
  }
  return a;
}

inline void save_dense_csv(const std::string& path, const Tensor& m) {
  if (m.ndim() != 2) throw std::invalid_argument("save_dense_csv: need a matrix");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  for (int i = 0; i < m.dim(0); ++i) {
    for (int j = 0; j < m.dim(1); ++j) out << (j ? "," : "") << m(i, j);
    out << "\n";
  }
}

inline Tensor load_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> vals;
  std::string line;
  int rows = 0, cols = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    int c = 0;
    while (std::getline(ls, cell, ',')) {
      vals.push_back(std::stod(cell));
      ++c;
    }
    if (cols < 0) cols = c;
    if (c != cols) throw std::runtime_error(path + ": ragged row " + std::to_string(rows));
    ++rows;
  }
  return Tensor({rows, cols}, std::move(vals));
}

}  // namespace lgf

#endif  // LGF_GRAPH_ADJACENCY_HPP_
