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

#ifndef LGF_HARNESS_CONFIG_HPP_
#define LGF_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgf {

enum class ModelKind { kGts, kMtgnn, kGdn, kNri, kLstm, kLstmU };
enum class GraphMode { kLearned, kGroundTruth, kRandom, kNone };

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "gts") return ModelKind::kGts;
  if (s == "mtgnn") return ModelKind::kMtgnn;
  if (s == "gdn") return ModelKind::kGdn;
  if (s == "nri") return ModelKind::kNri;
  if (s == "lstm") return ModelKind::kLstm;
  if (s == "lstm-u") return ModelKind::kLstmU;
  throw std::invalid_argument("unknown model `" + s + "`");
}

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::kGts: return "gts";
    case ModelKind::kMtgnn: return "mtgnn";
    case ModelKind::kGdn: return "gdn";
    case ModelKind::kNri: return "nri";
    case ModelKind::kLstm: return "lstm";
    case ModelKind::kLstmU: return "lstm-u";
  }
  return "?";
}

inline GraphMode graph_mode_from_string(const std::string& s) {
  if (s == "learned") return GraphMode::kLearned;
  if (s == "ground-truth") return GraphMode::kGroundTruth;
  if (s == "random") return GraphMode::kRandom;
  if (s == "none") return GraphMode::kNone;
  throw std::invalid_argument("unknown graph source `" + s + "`");
}

inline const char* to_string(GraphMode m) {
  switch (m) {
    case GraphMode::kLearned: return "learned";
    case GraphMode::kGroundTruth: return "ground-truth";
    case GraphMode::kRandom: return "random";
    case GraphMode::kNone: return "none";
  }
  return "?";
}

struct ExperimentConfig {
  ModelKind model = ModelKind::kGts;
  GraphMode graph_source = GraphMode::kLearned;
  int horizon = 12;
  int max_epochs = 200;
  int patience = 20;
  int batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double lambda_reg = 0.0;  // GTS prior-graph regularization weight
  int window = 20;
  std::string normalization = "zscore";  // zscore | minmax01
  bool mask_zero_targets = false;
  double train_fraction = 0.7;
  double val_fraction = 0.1;
  // Model sizes.
  int dcrnn_hidden = 32;
  int lstm_hidden = 64;
  int embed_dim = 32;
  int nri_hidden = 32;
  int decoder_hidden = 16;
  int edge_types = 2;
  double temperature = 0.5;

  void apply(const std::string& key, const std::string& value) {
    auto as_int = [&](const char* name) {
      try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config key `") + name + "` needs an integer, got `" + value + "`");
      }
    };
    auto as_double = [&](const char* name) {
      try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config key `") + name + "` needs a number, got `" + value + "`");
      }
    };
    if (key == "model") model = model_kind_from_string(value);
    else if (key == "graph_source") graph_source = graph_mode_from_string(value);
    else if (key == "horizon") horizon = as_int("horizon");
    else if (key == "max_epochs") max_epochs = as_int("max_epochs");
    else if (key == "patience") patience = as_int("patience");
    else if (key == "batch_size") batch_size = as_int("batch_size");
    else if (key == "lr") lr = as_double("lr");
    else if (key == "seed") seed = static_cast<std::uint64_t>(as_int("seed"));
    else if (key == "lambda_reg") lambda_reg = as_double("lambda_reg");
    else if (key == "window") window = as_int("window");
    else if (key == "normalization") {
      if (value != "zscore" && value != "minmax01") {
        throw std::invalid_argument("normalization must be zscore or minmax01, got `" + value + "`");
      }
      normalization = value;
    } else if (key == "mask_zero_targets") mask_zero_targets = as_int("mask_zero_targets") != 0;
    else if (key == "train_fraction") train_fraction = as_double("train_fraction");
    else if (key == "val_fraction") val_fraction = as_double("val_fraction");
    else if (key == "dcrnn_hidden") dcrnn_hidden = as_int("dcrnn_hidden");
    else if (key == "lstm_hidden") lstm_hidden = as_int("lstm_hidden");
    else if (key == "embed_dim") embed_dim = as_int("embed_dim");
    else if (key == "nri_hidden") nri_hidden = as_int("nri_hidden");
    else if (key == "decoder_hidden") decoder_hidden = as_int("decoder_hidden");
    else if (key == "edge_types") edge_types = as_int("edge_types");
    else if (key == "temperature") temperature = as_double("temperature");
    else throw std::invalid_argument("unknown config key `" + key + "`");
  }

  std::vector<std::pair<std::string, std::string>> snapshot() const {
    auto d = [](double v) {
      std::ostringstream os;
      os << v;
      return os.str();
    };
    return {{"model", to_string(model)},
            {"graph_source", to_string(graph_source)},
            {"horizon", std::to_string(horizon)},
            {"max_epochs", std::to_string(max_epochs)},
            {"patience", std::to_string(patience)},
            {"batch_size", std::to_string(batch_size)},
            {"lr", d(lr)},
            {"seed", std::to_string(seed)},
            {"lambda_reg", d(lambda_reg)},
            {"window", std::to_string(window)},
            {"normalization", normalization},
            {"mask_zero_targets", mask_zero_targets ? "1" : "0"},
            {"train_fraction", d(train_fraction)},
            {"val_fraction", d(val_fraction)},
            {"dcrnn_hidden", std::to_string(dcrnn_hidden)},
            {"lstm_hidden", std::to_string(lstm_hidden)},
            {"embed_dim", std::to_string(embed_dim)},
            {"nri_hidden", std::to_string(nri_hidden)},
            {"decoder_hidden", std::to_string(decoder_hidden)},
            {"edge_types", std::to_string(edge_types)},
            {"temperature", d(temperature)}};
  }
};

/// Reads a flat `key = value` file (# comments, blank lines allowed) into an
/// ExperimentConfig starting from the defaults.
inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace lgf

#endif  // LGF_HARNESS_CONFIG_HPP_
