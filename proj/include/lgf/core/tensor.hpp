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

#ifndef LGF_CORE_TENSOR_HPP_
#define LGF_CORE_TENSOR_HPP_

#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgf {

class Tape;

using Shape = std::vector<int>;

inline int numel(const Shape& s) {
  int n = 1;
  for (int d : s) n *= d;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

inline void check_shape(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Dense row-major double tensor. Data is shared between copies; mutation
/// goes through mutable_data() which copies when the buffer is shared.
/// When `node >= 0` the value is registered on `tape` and participates in
/// reverse-mode differentiation. Tape pointers are only valid for the
/// duration of one forward/backward pass; detach() strips them.
class Tensor {
 public:
  Tensor() : data_(std::make_shared<std::vector<double>>()) {}

  Tensor(Shape shape, std::vector<double> data)
      : shape_(std::move(shape)),
        data_(std::make_shared<std::vector<double>>(std::move(data))) {
    check_shape(numel(shape_) == static_cast<int>(data_->size()),
                "tensor data length " + std::to_string(data_->size()) +
                    " does not match shape " + shape_str(shape_));
  }

  static Tensor zeros(Shape shape) {
    int n = numel(shape);
    return Tensor(std::move(shape), std::vector<double>(n, 0.0));
  }

  static Tensor full(Shape shape, double v) {
    int n = numel(shape);
    return Tensor(std::move(shape), std::vector<double>(n, v));
  }

  static Tensor scalar(double v) { return Tensor(Shape{}, {v}); }

  static Tensor identity(int n) {
    Tensor t = zeros({n, n});
    for (int i = 0; i < n; ++i) t.mutable_data()[i * n + i] = 1.0;
    return t;
  }

  const Shape& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(data_->size()); }
  bool is_scalar() const { return data_->size() == 1 && shape_.empty(); }

  const std::vector<double>& data() const { return *data_; }

  std::vector<double>& mutable_data() {
    if (data_.use_count() > 1) {
      data_ = std::make_shared<std::vector<double>>(*data_);
    }
    return *data_;
  }

  double operator()(int i) const { return (*data_)[static_cast<size_t>(i)]; }
  double operator()(int i, int j) const {
    return (*data_)[static_cast<size_t>(i) * dim(1) + j];
  }
  double operator()(int i, int j, int k) const {
    return (*data_)[(static_cast<size_t>(i) * dim(1) + j) * dim(2) + k];
  }

  double value() const {
    check_shape(data_->size() == 1, "value() on non-scalar tensor");
    return (*data_)[0];
  }

  bool on_tape() const { return tape != nullptr && node >= 0; }

  /// Copy sharing the data buffer but with no tape participation.
  Tensor detach() const {
    Tensor t;
    t.shape_ = shape_;
    t.data_ = data_;
    return t;
  }

  bool all_finite() const {
    for (double v : *data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  bool requires_grad = false;
  Tape* tape = nullptr;
  int node = -1;

 private:
  Shape shape_;
  std::shared_ptr<std::vector<double>> data_;
};

}  // namespace lgf

#endif  // LGF_CORE_TENSOR_HPP_
