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

#ifndef LGF_CORE_PARAMS_HPP_
#define LGF_CORE_PARAMS_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgf/core/rng.hpp"
#include "lgf/core/tape.hpp"
#include "lgf/core/tensor.hpp"

namespace lgf {

/// Named registry of a model's learnable tensors. Holds non-owning pointers;
/// the model structs own the tensors.
class ParamSet {
 public:
  void add(const std::string& name, Tensor& t) { items_.emplace_back(name, &t); }

  void merge(const ParamSet& other, const std::string& prefix) {
    for (const auto& [name, t] : other.items_) items_.emplace_back(prefix + name, t);
  }

  size_t size() const { return items_.size(); }
  Tensor& tensor(size_t i) { return *items_[i].second; }
  const Tensor& tensor(size_t i) const { return *items_[i].second; }
  const std::string& name(size_t i) const { return items_[i].first; }

  void watch_all(Tape& tape) {
    for (auto& [name, t] : items_) tape.watch(*t);
  }

  std::vector<Tensor> grads(const Tape& tape) const {
    std::vector<Tensor> out;
    out.reserve(items_.size());
    for (const auto& [name, t] : items_) out.push_back(tape.grad(*t));
    return out;
  }

  /// Deep copies of the current values (snapshot for early stopping).
  std::vector<Tensor> snapshot() const {
    std::vector<Tensor> out;
    out.reserve(items_.size());
    for (const auto& [name, t] : items_) out.push_back(Tensor(t->shape(), t->data()));
    return out;
  }

  void restore(const std::vector<Tensor>& snap) {
    if (snap.size() != items_.size()) {
      throw std::invalid_argument("ParamSet::restore: snapshot size mismatch");
    }
    for (size_t i = 0; i < snap.size(); ++i) {
      if (snap[i].shape() != items_[i].second->shape()) {
        throw std::invalid_argument("ParamSet::restore: shape mismatch for " + items_[i].first);
      }
      items_[i].second->mutable_data() = snap[i].data();
    }
  }

  /// Flat binary blob of all parameter values, plus a text manifest with one
  /// `name shape offset` line per parameter (offset in doubles).
  void save(const std::string& bin_path, const std::string& manifest_path) const {
    std::ofstream bin(bin_path, std::ios::binary);
    std::ofstream man(manifest_path);
    if (!bin || !man) throw std::runtime_error("cannot write parameter files under " + bin_path);
    std::uint64_t offset = 0;
    for (const auto& [name, t] : items_) {
      bin.write(reinterpret_cast<const char*>(t->data().data()),
                static_cast<std::streamsize>(t->data().size() * sizeof(double)));
      man << name << " " << shape_str(t->shape()) << " " << offset << "\n";
      offset += t->data().size();
    }
  }

  void load(const std::string& bin_path) {
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open parameter blob " + bin_path);
    for (auto& [name, t] : items_) {
      auto& d = t->mutable_data();
      bin.read(reinterpret_cast<char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(double)));
      if (!bin) throw std::runtime_error("parameter blob " + bin_path + " truncated at " + name);
    }
  }

  auto begin() { return items_.begin(); }
  auto end() { return items_.end(); }

 private:
  std::vector<std::pair<std::string, Tensor*>> items_;
};

/// Glorot-uniform initialization treating the first extent as fan-in rows.
inline Tensor glorot(Shape shape, RngStream& rng) {
  int fan_in = shape.empty() ? 1 : shape[0];
  int fan_out = shape.size() >= 2 ? shape[shape.size() - 1] : 1;
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.mutable_data()) v = rng.uniform(-limit, limit);
  return t;
}

inline Tensor uniform_init(Shape shape, double lo, double hi, RngStream& rng) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.mutable_data()) v = rng.uniform(lo, hi);
  return t;
}

}  // namespace lgf

#endif  // LGF_CORE_PARAMS_HPP_
