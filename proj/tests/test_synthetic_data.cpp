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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "lgf/data/dataset_io.hpp"
#include "lgf/data/generators.hpp"
#include "lgf/data/ppr.hpp"
#include "lgf/data/sbm.hpp"
#include "lgf/data/sinusoid.hpp"

using namespace lgf;

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double ma = 0, mb = 0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cab = 0, ca = 0, cb = 0;
  for (size_t i = 0; i < n; ++i) {
    cab += (a[i] - ma) * (b[i] - mb);
    ca += (a[i] - ma) * (a[i] - ma);
    cb += (b[i] - mb) * (b[i] - mb);
  }
  return cab / std::sqrt(ca * cb);
}

}  // namespace

TEST_CASE("sinusoid degenerate cases") {
  auto flat = sample_sinusoid({0.2, 0.0, 1.0, 0.7}, 10);
  for (double v : flat) REQUIRE(v == 0.7);
  auto zero_start = sample_sinusoid({0.05, 1.0, 0.0, 0.0}, 3);
  REQUIRE(zero_start[0] == 0.0);
  REQUIRE_THROWS_AS(sample_sinusoid({0.1, 1.0, 0.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("sinusoid periodicity") {
  const double f = 2.0 * std::numbers::pi / 50.0;
  auto s = sample_sinusoid({f, 1.3, 0.4, -0.2}, 200);
  for (int t = 0; t < 150; ++t) {
    REQUIRE(s[static_cast<size_t>(t)] == Catch::Approx(s[static_cast<size_t>(t + 50)]).margin(1e-9));
  }
}

TEST_CASE("sinusoid parameter ranges") {
  RngStream rng(1);
  for (int i = 0; i < 200; ++i) {
    auto p = sample_sinusoid_params(rng);
    REQUIRE(p.frequency >= 0.01);
    REQUIRE(p.frequency <= 0.1);
    REQUIRE(p.amplitude >= 0.5);
    REQUIRE(p.amplitude <= 2.0);
    REQUIRE(p.hshift >= 0.0);
    REQUIRE(p.hshift <= 2.0 * std::numbers::pi);
    REQUIRE(p.vshift >= -1.0);
    REQUIRE(p.vshift <= 1.0);
  }
}

TEST_CASE("sbm deterministic limits") {
  RngStream rng(2);
  auto cliques = sbm_sample(10, 3, 1.0, 0.0, rng);
  // Balanced contiguous clusters of sizes 4, 3, 3.
  REQUIRE(cliques.labels == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 2, 2, 2});
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const bool same = cliques.labels[static_cast<size_t>(i)] == cliques.labels[static_cast<size_t>(j)];
      REQUIRE(cliques.adjacency.weights(i, j) == ((same && i != j) ? 1.0 : 0.0));
    }
  }
  auto empty = sbm_sample(8, 2, 0.0, 0.0, rng);
  for (double v : empty.adjacency.weights.data()) REQUIRE(v == 0.0);
  REQUIRE_THROWS_AS(sbm_sample(8, 2, 0.4, 0.6, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(sbm_sample(8, 9, 0.5, 0.1, rng), std::invalid_argument);
}

TEST_CASE("sbm densities follow the block probabilities") {
  RngStream rng(3);
  auto g = sbm_sample(100, 5, 0.5, 0.05, rng);
  int within = 0, between = 0, win_pairs = 0, btw_pairs = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = i + 1; j < 100; ++j) {
      const bool same = g.labels[static_cast<size_t>(i)] == g.labels[static_cast<size_t>(j)];
      const bool edge = g.adjacency.weights(i, j) != 0.0;
      if (same) {
        ++win_pairs;
        within += edge;
      } else {
        ++btw_pairs;
        between += edge;
      }
      REQUIRE(g.adjacency.weights(i, j) == g.adjacency.weights(j, i));
    }
    REQUIRE(g.adjacency.weights(i, i) == 0.0);
  }
  const double win_density = static_cast<double>(within) / win_pairs;
  const double btw_density = static_cast<double>(between) / btw_pairs;
  REQUIRE(std::fabs(win_density - 0.5) <= 4.0 * std::sqrt(0.5 * 0.5 / win_pairs));
  REQUIRE(std::fabs(btw_density - 0.05) <= 4.0 * std::sqrt(0.05 * 0.95 / btw_pairs));
}

TEST_CASE("ppr of the empty graph is the identity") {
  Tensor S = ppr_matrix(Tensor::zeros({4, 4}), 0.15);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) REQUIRE(S(i, j) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
  }
}

TEST_CASE("ppr two-node closed form") {
  Tensor A({2, 2}, {0, 1, 1, 0});
  Tensor S = ppr_matrix(A, 0.15);
  // S = r (I - (1-r) P)^-1 with P the swap matrix: S00 = r / (1 - q^2),
  // S01 = r q / (1 - q^2), q = 0.85.
  const double q = 0.85, r = 0.15;
  REQUIRE(S(0, 0) == Catch::Approx(r / (1 - q * q)).epsilon(1e-12));
  REQUIRE(S(0, 1) == Catch::Approx(r * q / (1 - q * q)).epsilon(1e-12));
  REQUIRE(S(0, 0) == Catch::Approx(0.54054054).margin(1e-7));
  REQUIRE(S(0, 1) == Catch::Approx(0.45945945).margin(1e-7));
}

TEST_CASE("ppr matches the truncated power series") {
  RngStream rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = sbm_sample(10, 2, 0.6, 0.2, rng);
    const Tensor& A = g.adjacency.weights;
    Tensor S = ppr_matrix(A, 0.15);
    // Neumann reference: sum_k r (1-r)^k P^k over 200 terms.
    const int n = 10;
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
    std::vector<double> powk(static_cast<size_t>(n) * n, 0.0), ref(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) powk[static_cast<size_t>(i) * n + i] = 1.0;  // P^0
    double coeff = 0.15;
    for (int k = 0; k <= 200; ++k) {
      for (int i = 0; i < n * n; ++i) ref[static_cast<size_t>(i)] += coeff * powk[static_cast<size_t>(i)];
      std::vector<double> next(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
          for (int j = 0; j < n; ++j) {
            next[static_cast<size_t>(i) * n + j] += powk[static_cast<size_t>(i) * n + m] * P[static_cast<size_t>(m) * n + j];
          }
        }
      }
      powk = next;
      coeff *= 0.85;
    }
    for (int i = 0; i < n * n; ++i) {
      REQUIRE(std::fabs(S.data()[static_cast<size_t>(i)] - ref[static_cast<size_t>(i)]) < 1e-8);
    }
  }
}

TEST_CASE("ppr rows are distributions") {
  RngStream rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = sbm_sample(20, 4, 0.5, 0.1, rng);
    Tensor S = ppr_matrix(g.adjacency.weights, 0.15);
    for (int i = 0; i < 20; ++i) {
      double sum = 0;
      for (int j = 0; j < 20; ++j) {
        REQUIRE(S(i, j) >= 0.0);
        sum += S(i, j);
      }
      REQUIRE(std::fabs(sum - 1.0) < 1e-10);
    }
  }
  REQUIRE_THROWS_AS(ppr_matrix(Tensor::zeros({3, 3}), 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(ppr_matrix(Tensor::zeros({3, 3}), 1.0), std::invalid_argument);
}

TEST_CASE("diffusion dataset with full mix ignores the graph") {
  DiffusionDatasetConfig cfg;
  cfg.nodes = 12;
  cfg.steps = 100;
  cfg.clusters = 3;
  cfg.mix = 1.0;
  cfg.seed = 7;
  auto a = diffusion_dataset(cfg);
  cfg.graph_salt = 9;  // different graph draw, same sinusoid stream
  auto b = diffusion_dataset(cfg);
  REQUIRE(a.series.data() == b.series.data());
  REQUIRE(a.ground_truth.weights.data() != b.ground_truth.weights.data());
}

TEST_CASE("diffusion dataset on the empty graph is a pure self-lag mix") {
  DiffusionDatasetConfig cfg;
  cfg.nodes = 6;
  cfg.steps = 80;
  cfg.clusters = 2;
  cfg.p_in = 0.0;
  cfg.p_out = 0.0;
  cfg.noise = 0.0;
  cfg.seed = 11;
  auto mixed = diffusion_dataset(cfg);
  auto raw_cfg = cfg;
  raw_cfg.mix = 1.0;
  Tensor raw = diffusion_dataset(raw_cfg).series;
  for (int i = 0; i < 6; ++i) {
    for (int t = 0; t < 80; ++t) {
      const double expect = t < cfg.lag ? raw(i, t) : 0.75 * raw(i, t) + 0.25 * raw(i, t - cfg.lag);
      REQUIRE(mixed.series(i, t) == Catch::Approx(expect).margin(1e-12));
    }
  }
}

TEST_CASE("diffusion dataset couples cluster-mates at the configured lag") {
  DiffusionDatasetConfig cfg;
  cfg.nodes = 30;
  cfg.steps = 800;
  cfg.clusters = 5;
  cfg.seed = 3;
  auto ds = diffusion_dataset(cfg);
  // Labels follow the balanced contiguous assignment (6 nodes per cluster).
  auto label = [&](int i) { return i / 6; };
  const int T = cfg.steps, C = cfg.lag;
  auto corr_at_lag = [&](int i, int j) {
    std::vector<double> a, b;
    for (int t = C; t < T; ++t) {
      a.push_back(ds.series(i, t));
      b.push_back(ds.series(j, t - C));
    }
    return pearson(a, b);
  };
  double within = 0, across = 0;
  int wn = 0, an = 0;
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      if (i == j) continue;
      const double c = std::fabs(corr_at_lag(i, j));
      if (label(i) == label(j)) {
        within += c;
        ++wn;
      } else {
        across += c;
        ++an;
      }
    }
  }
  REQUIRE(within / wn > across / an);
}

TEST_CASE("diffusion dataset is deterministic and validates its config") {
  DiffusionDatasetConfig cfg;
  cfg.nodes = 8;
  cfg.steps = 60;
  cfg.clusters = 2;
  cfg.seed = 5;
  auto a = diffusion_dataset(cfg);
  auto b = diffusion_dataset(cfg);
  REQUIRE(a.series.data() == b.series.data());
  REQUIRE(a.ground_truth.weights.data() == b.ground_truth.weights.data());
  for (double v : a.series.data()) REQUIRE(std::isfinite(v));
  cfg.mix = 1.5;
  REQUIRE_THROWS_AS(diffusion_dataset(cfg), std::invalid_argument);
  cfg.mix = 0.75;
  cfg.lag = 60;
  REQUIRE_THROWS_AS(diffusion_dataset(cfg), std::invalid_argument);
  cfg.lag = 10;
  cfg.restart = 1.0;
  REQUIRE_THROWS_AS(diffusion_dataset(cfg), std::invalid_argument);
}

TEST_CASE("dag dataset degenerate edge probabilities") {
  DagDatasetConfig cfg;
  cfg.nodes = 10;
  cfg.steps = 40;
  cfg.seed = 2;
  cfg.edge_prob = 0.0;
  auto empty = dag_dataset(cfg);
  for (double v : empty.ground_truth.weights.data()) REQUIRE(v == 0.0);
  cfg.edge_prob = 1.0;
  auto full = dag_dataset(cfg);
  double edges = 0;
  for (double v : full.ground_truth.weights.data()) edges += v;
  REQUIRE(edges == 45.0);
}

TEST_CASE("dag dataset pass-through child copies its parent") {
  DagDatasetConfig cfg;
  cfg.nodes = 2;
  cfg.steps = 50;
  cfg.edge_prob = 1.0;
  cfg.noise = 0.0;
  cfg.stretch_lo = cfg.stretch_hi = 1.0;
  cfg.vshift_lo = cfg.vshift_hi = 0.0;
  cfg.hshift_max = 0;
  cfg.seed = 9;
  auto ds = dag_dataset(cfg);
  for (int t = 0; t < 50; ++t) {
    REQUIRE(ds.series(1, t) == Catch::Approx(ds.series(0, t)).margin(1e-12));
  }
  REQUIRE(ds.ground_truth.weights(0, 1) == 1.0);
}

TEST_CASE("dag dataset is acyclic and deterministic for every seed") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DagDatasetConfig cfg;
    cfg.nodes = 20;
    cfg.steps = 30;
    cfg.seed = seed;
    auto ds = dag_dataset(cfg);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j <= i; ++j) REQUIRE(ds.ground_truth.weights(i, j) == 0.0);
    }
    auto again = dag_dataset(cfg);
    REQUIRE(ds.series.data() == again.series.data());
    for (double v : ds.series.data()) REQUIRE(std::isfinite(v));
  }
}

TEST_CASE("series csv roundtrip and validation") {
  RngStream rng(6);
  Tensor series = Tensor::zeros({3, 7});
  for (double& v : series.mutable_data()) v = rng.normal();
  const std::string path = "/tmp/lgf_series_test.csv";
  save_series_csv(path, series);
  Tensor back = load_series_csv(path);
  REQUIRE(back.shape() == series.shape());
  REQUIRE(back.data() == series.data());

  {
    std::ofstream f("/tmp/lgf_bad_header.csv");
    f << "node_0,foo\n1.0,2.0\n";
  }
  REQUIRE_THROWS_WITH(load_series_csv("/tmp/lgf_bad_header.csv"),
                      Catch::Matchers::ContainsSubstring("bad header"));
  {
    std::ofstream f("/tmp/lgf_ragged.csv");
    f << "node_0,node_1\n1.0,2.0\n3.0\n";
  }
  REQUIRE_THROWS_WITH(load_series_csv("/tmp/lgf_ragged.csv"),
                      Catch::Matchers::ContainsSubstring("expected 2"));
  {
    std::ofstream f("/tmp/lgf_nonnum.csv");
    f << "node_0\nabc\n";
  }
  REQUIRE_THROWS_WITH(load_series_csv("/tmp/lgf_nonnum.csv"),
                      Catch::Matchers::ContainsSubstring("non-numeric"));
}

TEST_CASE("dataset directory export") {
  DagDatasetConfig cfg;
  cfg.nodes = 5;
  cfg.steps = 25;
  cfg.seed = 4;
  auto ds = dag_dataset(cfg);
  const std::string dir = "/tmp/lgf_dataset_test";
  save_dataset(dir, ds);
  REQUIRE(std::filesystem::exists(dir + "/series.csv"));
  REQUIRE(std::filesystem::exists(dir + "/graph.edges"));
  REQUIRE(std::filesystem::exists(dir + "/metadata.txt"));
  Tensor series = load_series_csv(dir + "/series.csv");
  REQUIRE(series.data() == ds.series.data());
  auto gt = load_edge_list(dir + "/graph.edges", 5);
  REQUIRE(gt.weights.data() == ds.ground_truth.weights.data());
  std::ifstream meta(dir + "/metadata.txt");
  std::string first;
  std::getline(meta, first);
  REQUIRE(first == "generator=dag");
}
