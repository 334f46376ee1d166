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

#ifndef LGF_DATA_DATASET_IO_HPP_
#define LGF_DATA_DATASET_IO_HPP_

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgf/core/tensor.hpp"
#include "lgf/data/generators.hpp"
#include "lgf/graph/adjacency.hpp"

namespace lgf {

/// Writes an [N, T] series tensor as CSV: rows are timesteps, columns are
/// nodes, header `node_0,node_1,...`.
inline void save_series_csv(const std::string& path, const Tensor& series) {
  check_shape(series.ndim() == 2, "save_series_csv: need [N, T], got " + shape_str(series.shape()));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write series csv " + path);
  out << std::setprecision(17);
  const int n = series.dim(0), T = series.dim(1);
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << "node_" << i;
  out << "\n";
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) out << (i ? "," : "") << series(i, t);
    out << "\n";
  }
}

/// Reads a series CSV back into an [N, T] tensor. The header must list
/// `node_0..node_{N-1}` in order; rows must be rectangular and numeric.
inline Tensor load_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series csv " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  const int n = static_cast<int>(header.size());
  for (int i = 0; i < n; ++i) {
    if (header[static_cast<size_t>(i)] != "node_" + std::to_string(i)) {
      throw std::runtime_error(path + ": bad header column " + std::to_string(i) + " `" +
                               header[static_cast<size_t>(i)] + "`");
    }
  }
  std::vector<double> cols;  // timestep-major while reading
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::istringstream ls(line);
    std::string cell;
    int c = 0;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        cols.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": non-numeric cell `" + cell + "` in row " +
                                 std::to_string(rows));
      }
      ++c;
    }
    if (c != n) {
      throw std::runtime_error(path + ": row " + std::to_string(rows) + " has " +
                               std::to_string(c) + " cells, expected " + std::to_string(n));
    }
  }
  if (rows == 0) throw std::runtime_error(path + ": no data rows");
  Tensor out = Tensor::zeros({n, rows});
  for (int t = 0; t < rows; ++t) {
    for (int i = 0; i < n; ++i) {
      out.mutable_data()[static_cast<size_t>(i) * rows + t] = cols[static_cast<size_t>(t) * n + i];
    }
  }
  return out;
}

/// Writes series.csv, graph.edges and metadata.txt (key=value lines) into
/// `dir`, creating it if needed.
inline void save_dataset(const std::string& dir, const GeneratedDataset& ds) {
  std::filesystem::create_directories(dir);
  save_series_csv(dir + "/series.csv", ds.series);
  save_edge_list(dir + "/graph.edges", ds.ground_truth);
  std::ofstream meta(dir + "/metadata.txt");
  if (!meta) throw std::runtime_error("cannot write metadata under " + dir);
  meta << "generator=" << ds.generator << "\n";
  for (const auto& [k, v] : ds.config) meta << k << "=" << v << "\n";
}

}  // namespace lgf

#endif  // LGF_DATA_DATASET_IO_HPP_
