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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgf/data/dataset_io.hpp"
#include "lgf/data/generators.hpp"
#include "lgf/harness/ablation.hpp"
#include "lgf/harness/correlate.hpp"
#include "lgf/harness/train.hpp"

namespace {

struct LoadedDataset {
  lgf::Tensor series;
  std::optional<lgf::AdjacencyMatrix> ground_truth;
};

LoadedDataset load_dataset(const std::string& dir) {
  LoadedDataset ds;
  ds.series = lgf::load_series_csv(dir + "/series.csv");
  const std::string edges = dir + "/graph.edges";
  if (std::filesystem::exists(edges)) {
    ds.ground_truth = lgf::load_edge_list(edges, ds.series.dim(0));
  }
  return ds;
}

lgf::ExperimentConfig build_config(const std::string& config_path, const std::string& model,
                                   const std::string& graph_source, std::int64_t seed) {
  lgf::ExperimentConfig cfg =
      config_path.empty() ? lgf::ExperimentConfig{} : lgf::load_config_file(config_path);
  if (!model.empty()) cfg.apply("model", model);
  if (!graph_source.empty()) cfg.apply("graph_source", graph_source);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  return cfg;
}

void print_metrics(const std::map<int, std::optional<double>>& metrics) {
  std::cout << "horizon,mae\n";
  for (const auto& [h, mae] : metrics) {
    std::cout << h << ",";
    if (mae) {
      std::cout << *mae << "\n";
    } else {
      std::cout << "undefined\n";
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"latent-graph forecasting toolkit"};
  app.require_subcommand(1);

  std::string kind, out_dir, config_path, model, graph_source, data_dir, record_dir;
  std::vector<std::string> record_dirs;
  std::int64_t seed = -1;
  int repeats = 5, nodes = 0, steps = 0;

  CLI::App* gen = app.add_subcommand("generate-data", "synthesize a dataset directory");
  gen->add_option("--kind", kind, "diffusion or dag")->required()
      ->check(CLI::IsMember({"diffusion", "dag"}));
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--nodes", nodes, "node count override");
  gen->add_option("--steps", steps, "timestep count override");
  double noise = -1.0;
  gen->add_option("--noise", noise, "observation noise scale override");
  int hshift_max = -1;
  gen->add_option("--hshift-max", hshift_max, "largest horizontal parent shift (dag only)");

  CLI::App* train = app.add_subcommand("train", "train one model and save a run record");
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--seed", seed, "seed override");
  train->add_option("--model", model, "model override");
  train->add_option("--graph-source", graph_source, "graph source override");
  train->add_option("--data", data_dir, "dataset directory")->required();
  train->add_option("--out", out_dir, "run record directory")->required();

  CLI::App* eval = app.add_subcommand("evaluate", "re-evaluate a saved run record");
  eval->add_option("--record", record_dir, "run record directory")->required();
  eval->add_option("--data", data_dir, "dataset directory")->required();

  CLI::App* ablate = app.add_subcommand("ablate", "train across graph sources and compare");
  ablate->add_option("--config", config_path, "key = value config file");
  ablate->add_option("--model", model, "model override");
  ablate->add_option("--repeats", repeats, "seeds per graph source");
  ablate->add_option("--data", data_dir, "dataset directory")->required();
  ablate->add_option("--out", out_dir, "output directory for run records")->required();

  CLI::App* corr = app.add_subcommand("correlate", "correlate edge scores across run records");
  corr->add_option("records", record_dirs, "run record directories")->required()->expected(-1);
  corr->add_option("--data", data_dir, "dataset directory providing the reference graph");
  corr->add_option("--out", out_dir, "report file (defaults to stdout only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      lgf::GeneratedDataset ds;
      if (kind == "diffusion") {
        lgf::DiffusionDatasetConfig cfg;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (nodes > 0) cfg.nodes = nodes;
        if (steps > 0) cfg.steps = steps;
        if (noise >= 0.0) cfg.noise = noise;
        if (cfg.nodes < 3 * cfg.clusters) cfg.clusters = std::max(1, cfg.nodes / 3);
        ds = lgf::diffusion_dataset(cfg);
      } else {
        lgf::DagDatasetConfig cfg;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (nodes > 0) cfg.nodes = nodes;
        if (steps > 0) cfg.steps = steps;
        if (noise >= 0.0) cfg.noise = noise;
        if (hshift_max >= 0) cfg.hshift_max = hshift_max;
        ds = lgf::dag_dataset(cfg);
      }
      lgf::save_dataset(out_dir, ds);
      std::cout << "wrote " << kind << " dataset (" << ds.series.dim(0) << " nodes, "
                << ds.series.dim(1) << " steps) to " << out_dir << "\n";
    } else if (*train) {
      lgf::ExperimentConfig cfg = build_config(config_path, model, graph_source, seed);
      LoadedDataset ds = load_dataset(data_dir);
      lgf::TrainOutput out = lgf::train_model(
          cfg, ds.series, ds.ground_truth ? &*ds.ground_truth : nullptr);
      lgf::ParamSet params = out.runtime->param_set();
      lgf::save_run_record(out_dir, out.record, params);
      print_metrics(out.record.test_mae);
    } else if (*eval) {
      lgf::ExperimentConfig cfg = lgf::load_config_file(record_dir + "/config");
      LoadedDataset ds = load_dataset(data_dir);
      const int n = ds.series.dim(0), T = ds.series.dim(1);
      const lgf::SplitBounds bounds =
          lgf::chronological_splits(T, cfg.train_fraction, cfg.val_fraction);
      const lgf::Normalizer norm =
          lgf::fit_normalizer(ds.series, bounds.train_end, cfg.normalization);
      const lgf::Tensor normalized = norm.normalize(ds.series);
      const lgf::WindowSet ws = lgf::make_windows(T, cfg.window, cfg.horizon, bounds);
      lgf::Tensor train_slice = lgf::Tensor::zeros({n, bounds.train_end});
      for (int i = 0; i < n; ++i) {
        for (int t = 0; t < bounds.train_end; ++t) {
          train_slice.mutable_data()[static_cast<size_t>(i) * bounds.train_end + t] =
              normalized(i, t);
        }
      }
      lgf::RngStream base(cfg.seed);
      auto rt = lgf::ModelRuntime::create(cfg, n, train_slice,
                                          ds.ground_truth ? &*ds.ground_truth : nullptr, base);
      lgf::ParamSet params = rt->param_set();
      params.load(record_dir + "/params.bin");
      lgf::SplitEval test = lgf::evaluate_split(*rt, normalized, ds.series, ws.test_starts, norm,
                                                lgf::report_horizons(cfg.horizon));
      print_metrics(test.per_horizon);
    } else if (*ablate) {
      lgf::ExperimentConfig cfg = build_config(config_path, model, "", -1);
      LoadedDataset ds = load_dataset(data_dir);
      std::vector<lgf::GraphMode> modes{lgf::GraphMode::kLearned, lgf::GraphMode::kRandom,
                                        lgf::GraphMode::kNone};
      if (ds.ground_truth) modes.insert(modes.begin() + 1, lgf::GraphMode::kGroundTruth);
      auto rows = lgf::run_ablation_suite(cfg, modes, repeats, ds.series,
                                          ds.ground_truth ? &*ds.ground_truth : nullptr, out_dir);
      const std::string table = lgf::format_ablation_table(rows);
      std::cout << table;
      std::ofstream tf(out_dir + "/ablation.txt");
      tf << table;
    } else if (*corr) {
      std::vector<lgf::Tensor> scores;
      for (const auto& dir : record_dirs) {
        scores.push_back(lgf::load_dense_csv(dir + "/edge_scores.csv"));
      }
      std::optional<lgf::Tensor> gt;
      if (!data_dir.empty()) {
        LoadedDataset ds = load_dataset(data_dir);
        if (ds.ground_truth) gt = ds.ground_truth->weights;
      }
      lgf::CorrelationReport rep = lgf::correlate_edge_scores(scores, gt ? &*gt : nullptr);
      auto show = [](const std::optional<double>& v) {
        return v ? std::to_string(*v) : std::string("undefined");
      };
      std::cout << "cross_mean," << show(rep.mean_cross) << "\n";
      std::cout << "gt_mean," << show(rep.mean_gt) << "\n";
      if (!out_dir.empty()) lgf::save_correlation_report(out_dir, rep);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
