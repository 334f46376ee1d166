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

#ifndef LGF_CORE_TAPE_HPP_
#define LGF_CORE_TAPE_HPP_

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lgf/core/tensor.hpp"

namespace lgf {

/// Reverse-mode tape. Nodes are appended in execution order, which is a
/// topological order by construction; backward() walks the node list once,
/// in reverse, pulling each node's output gradient back to its parents.
class Tape {
 public:
  /// Accumulates contributions into grads_[node] for the node's parents.
  using PullFn = std::function<void(const std::vector<double>& grad_out, Tape&)>;

  /// Records a computed node. `pull` may be empty for leaves.
  int record(Shape shape, PullFn pull) {
    nodes_.push_back(Node{std::move(shape), std::move(pull)});
    return static_cast<int>(nodes_.size()) - 1;
  }

  /// Marks `t` (in place) as a differentiable leaf of this tape.
  Tensor& watch(Tensor& t) {
    t.tape = this;
    t.node = record(t.shape(), nullptr);
    t.requires_grad = true;
    return t;
  }

  /// Runs reverse accumulation from a scalar loss recorded on this tape.
  void backward(const Tensor& loss) {
    if (loss.size() != 1) {
      throw std::invalid_argument("backward: loss must be a scalar");
    }
    if (loss.tape != this || loss.node < 0 ||
        loss.node >= static_cast<int>(nodes_.size())) {
      throw std::invalid_argument("backward: loss is not on this tape");
    }
    grads_.assign(nodes_.size(), {});
    grads_[static_cast<size_t>(loss.node)] = {1.0};
    for (int i = loss.node; i >= 0; --i) {
      auto& n = nodes_[static_cast<size_t>(i)];
      if (!grads_[static_cast<size_t>(i)].empty() && n.pull) {
        n.pull(grads_[static_cast<size_t>(i)], *this);
      }
    }
  }

  void accumulate(int node, const double* g, int n) {
    auto& dst = grads_[static_cast<size_t>(node)];
    if (dst.empty()) dst.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) dst[static_cast<size_t>(i)] += g[i];
  }

  void accumulate(int node, const std::vector<double>& g) {
    accumulate(node, g.data(), static_cast<int>(g.size()));
  }

  /// Gradient of the last backward() w.r.t. a tensor on this tape; zeros if
  /// the tensor never received a gradient.
  Tensor grad(const Tensor& t) const {
    if (t.tape != this || t.node < 0) {
      throw std::invalid_argument("grad: tensor is not on this tape");
    }
    const auto& g = grads_[static_cast<size_t>(t.node)];
    if (g.empty()) return Tensor::zeros(t.shape());
    return Tensor(t.shape(), g);
  }

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Shape shape;
    PullFn pull;
  };
  std::vector<Node> nodes_;
  std::vector<std::vector<double>> grads_;
};

/// Tape shared by a set of inputs, or nullptr when none participates.
/// Mixing tensors from two live tapes in one op is a caller bug.
inline Tape* tape_of(std::initializer_list<const Tensor*> ts) {
  Tape* tp = nullptr;
  for (const Tensor* t : ts) {
    if (t->on_tape()) {
      if (tp && tp != t->tape) {
        throw std::invalid_argument("op inputs belong to different tapes");
      }
      tp = t->tape;
    }
  }
  return tp;
}

}  // namespace lgf

#endif  // LGF_CORE_TAPE_HPP_
