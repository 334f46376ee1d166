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

#ifndef LGF_DATA_GENERATORS_HPP_
#define LGF_DATA_GENERATORS_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgf/core/rng.hpp"
#include "lgf/core/tensor.hpp"
#include "lgf/data/ppr.hpp"
#include "lgf/data/sbm.hpp"
#include "lgf/data/sinusoid.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

struct DiffusionDatasetConfig {
  int nodes = 100;
  int steps = 10000;
  int clusters = 5;
  double p_in = 0.5;
  double p_out = 0.05;
  double restart = 0.15;
  double mix = 0.75;  // weight of the raw sinusoid in the output
  int lag = 10;
  double noise = 0.1;
  std::uint64_t seed = 0;
  // Split index of the graph substream; two configs sharing `seed` but not
  // `graph_salt` draw different graphs over identical sinusoids.
  std::uint64_t graph_salt = 1;
};

struct DagDatasetConfig {
  int nodes = 100;
  int steps = 10000;
  double edge_prob = 0.1;
  double noise = 0.1;
  double stretch_lo = 0.8;
  double stretch_hi = 1.25;
  double vshift_lo = -0.5;
  double vshift_hi = 0.5;
  int hshift_max = 5;  // horizontal shift drawn uniformly from {0..hshift_max}
  std::uint64_t seed = 0;
};

struct GeneratedDataset {
  Tensor series;  // [N, T]
  AdjacencyMatrix ground_truth;
  std::string generator;
  std::vector<std::pair<std::string, std::string>> config;
};

/// Sinusoids diffused over an SBM graph by PPR, with a lagged mix:
/// z_t = mix * raw_t + (1 - mix) * diffused_{t-lag} for t >= lag, else raw_t.
/// Each receiving node averages independently noised copies of the others.
inline GeneratedDataset diffusion_dataset(const DiffusionDatasetConfig& cfg) {
  if (!(cfg.restart > 0.0 && cfg.restart < 1.0)) {
    throw std::invalid_argument("diffusion_dataset: restart must lie in (0, 1)");
  }
  if (!(cfg.mix >= 0.0 && cfg.mix <= 1.0)) {
    throw std::invalid_argument("diffusion_dataset: mix weight must lie in [0, 1]");
  }
  if (cfg.lag < 0 || cfg.lag >= cfg.steps) {
    throw std::invalid_argument("diffusion_dataset: lag must lie in [0, T)");
  }
  const int n = cfg.nodes, T = cfg.steps;
  RngStream base(cfg.seed);
  RngStream graph_rng = base.split(cfg.graph_salt);
  RngStream sine_rng = base.split(2);
  RngStream noise_rng = base.split(3);

  SbmGraph sbm = sbm_sample(n, cfg.clusters, cfg.p_in, cfg.p_out, graph_rng);
  Tensor S = ppr_matrix(sbm.adjacency.weights, cfg.restart);

  Tensor raw = Tensor::zeros({n, T});
  for (int i = 0; i < n; ++i) {
    auto s = sample_sinusoid(sample_sinusoid_params(sine_rng), T);
    std::copy(s.begin(), s.end(), raw.mutable_data().begin() + static_cast<size_t>(i) * T);
  }

  GeneratedDataset out;
  out.series = Tensor::zeros({n, T});
  auto& z = out.series.mutable_data();
  // Diffused values are only consumed `lag` steps later; stream the noise
  // per timestep instead of materializing an N x N x T field.
  std::vector<double> hat(static_cast<size_t>(n));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (int j = 0; j < n; ++j) {
        double v = raw(j, t);
        if (j != i) v += cfg.noise * noise_rng.normal();
        acc += S(i, j) * v;
      }
      hat[static_cast<size_t>(i)] = acc;
    }
    if (t + cfg.lag < T) {
      for (int i = 0; i < n; ++i) {
        z[static_cast<size_t>(i) * T + t + cfg.lag] = (1.0 - cfg.mix) * hat[static_cast<size_t>(i)];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < T; ++t) {
      const size_t idx = static_cast<size_t>(i) * T + t;
      z[idx] = t < cfg.lag ? raw(i, t) : z[idx] + cfg.mix * raw(i, t);
    }
  }
  out.ground_truth = sbm.adjacency;
  out.generator = "diffusion";
  out.config = {{"nodes", std::to_string(n)},
                {"steps", std::to_string(T)},
                {"clusters", std::to_string(cfg.clusters)},
                {"p_in", std::to_string(cfg.p_in)},
                {"p_out", std::to_string(cfg.p_out)},
                {"restart", std::to_string(cfg.restart)},
                {"mix", std::to_string(cfg.mix)},
                {"lag", std::to_string(cfg.lag)},
                {"noise", std::to_string(cfg.noise)},
                {"seed", std::to_string(cfg.seed)},
                {"graph_salt", std::to_string(cfg.graph_salt)}};
  return out;
}

/// Random DAG over the index order: node i draws parents from {j < i} with
/// probability p; parentless nodes are fresh sinusoids. Children combine
/// shift/stretch-modified parent series with Dirichlet(1) weights.
inline GeneratedDataset dag_dataset(const DagDatasetConfig& cfg) {
  if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0)) {
    throw std::invalid_argument("dag_dataset: edge probability must lie in [0, 1]");
  }
  if (cfg.hshift_max < 0) throw std::invalid_argument("dag_dataset: hshift_max must be nonnegative");
  const int n = cfg.nodes, T = cfg.steps;
  RngStream rng(cfg.seed);
  GeneratedDataset out;
  out.series = Tensor::zeros({n, T});
  out.ground_truth = AdjacencyMatrix::empty(n, GraphSource::kGroundTruth);
  auto& z = out.series.mutable_data();
  auto& gt = out.ground_truth.weights.mutable_data();
  for (int i = 0; i < n; ++i) {
    std::vector<int> parents;
    for (int j = 0; j < i; ++j) {
      if (rng.bernoulli(cfg.edge_prob)) parents.push_back(j);
    }
    double* row = z.data() + static_cast<size_t>(i) * T;
    if (parents.empty()) {
      auto s = sample_sinusoid(sample_sinusoid_params(rng), T);
      std::copy(s.begin(), s.end(), row);
    } else {
      std::vector<double> weights(parents.size());
      double wsum = 0;
      for (double& w : weights) {
        w = -std::log(1.0 - rng.uniform());
        wsum += w;
      }
      for (size_t pi = 0; pi < parents.size(); ++pi) {
        const double w = weights[pi] / wsum;
        const double stretch = rng.uniform(cfg.stretch_lo, cfg.stretch_hi);
        const double vshift = rng.uniform(cfg.vshift_lo, cfg.vshift_hi);
        const int hshift = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.hshift_max + 1)));
        const double* parent = z.data() + static_cast<size_t>(parents[pi]) * T;
        for (int t = 0; t < T; ++t) {
          row[t] += w * (stretch * parent[std::max(0, t - hshift)] + vshift);
        }
        gt[static_cast<size_t>(parents[pi]) * n + i] = 1.0;
      }
    }
    for (int t = 0; t < T; ++t) row[t] += cfg.noise * rng.normal();
  }
  out.generator = "dag";
  out.config = {{"nodes", std::to_string(n)},
                {"steps", std::to_string(T)},
                {"edge_prob", std::to_string(cfg.edge_prob)},
                {"noise", std::to_string(cfg.noise)},
                {"stretch_lo", std::to_string(cfg.stretch_lo)},
                {"stretch_hi", std::to_string(cfg.stretch_hi)},
                {"vshift_lo", std::to_string(cfg.vshift_lo)},
                {"vshift_hi", std::to_string(cfg.vshift_hi)},
                {"hshift_max", std::to_string(cfg.hshift_max)},
                {"seed", std::to_string(cfg.seed)}};
  return out;
}

}  // namespace lgf

#endif  // LGF_DATA_GENERATORS_HPP_
