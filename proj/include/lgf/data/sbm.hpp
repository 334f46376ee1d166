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

#ifndef LGF_DATA_SBM_HPP_
#define LGF_DATA_SBM_HPP_

#include <stdexcept>
#include <vector>

#include "lgf/core/rng.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

struct SbmGraph {
  AdjacencyMatrix adjacency;  // symmetric binary, zero diagonal
  std::vector<int> labels;    // cluster id per node
};

/// Stochastic blockmodel with balanced contiguous clusters (sizes differ by
/// at most 1): edge probability p_in within a cluster, p_out across.
inline SbmGraph sbm_sample(int n, int k, double p_in, double p_out, RngStream& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("sbm_sample: need 1 <= K <= N");
  if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0)) {
    throw std::invalid_argument("sbm_sample: need 0 <= p_out <= p_in <= 1");
  }
  SbmGraph g;
  g.labels.resize(static_cast<size_t>(n));
  const int base = n / k, extra = n % k;
  int node = 0;
  for (int c = 0; c < k; ++c) {
    const int size = base + (c < extra ? 1 : 0);
    for (int s = 0; s < size; ++s) g.labels[static_cast<size_t>(node++)] = c;
  }
  g.adjacency = AdjacencyMatrix::empty(n, GraphSource::kGroundTruth);
  g.adjacency.directed = false;
  auto& w = g.adjacency.weights.mutable_data();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = g.labels[static_cast<size_t>(i)] == g.labels[static_cast<size_t>(j)] ? p_in : p_out;
      if (rng.bernoulli(p)) {
        w[static_cast<size_t>(i) * n + j] = 1.0;
        w[static_cast<size_t>(j) * n + i] = 1.0;
      }
    }
  }
  return g;
}

}  // namespace lgf

#endif  // LGF_DATA_SBM_HPP_
