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

#ifndef LGF_DATA_PPR_HPP_
#define LGF_DATA_PPR_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "lgf/core/tensor.hpp"

namespace lgf {

/// Personalized-PageRank diffusion matrix S = r (I - (1-r) P)^-1 where P is
/// the row-normalized adjacency; isolated nodes receive a self-loop before
/// normalization. Rows of S sum to 1 and entries are nonnegative.
inline Tensor ppr_matrix(const Tensor& A, double restart) {
  if (!(restart > 0.0 && restart < 1.0)) {
    throw std::invalid_argument("ppr_matrix: restart probability must lie in (0, 1)");
  }
  check_shape(A.ndim() == 2 && A.dim(0) == A.dim(1),
              "ppr_matrix: need a square matrix, got " + shape_str(A.shape()));
  const int n = A.dim(0);
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Mat P = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double deg = 0;
    for (int j = 0; j < n; ++j) deg += A(i, j);
    if (deg == 0.0) {
      P(i, i) = 1.0;
    } else {
      for (int j = 0; j < n; ++j) P(i, j) = A(i, j) / deg;
    }
  }
  Mat M = Mat::Identity(n, n) - (1.0 - restart) * P;
  Eigen::PartialPivLU<Mat> lu(M);
  Mat S = restart * lu.solve(Mat::Identity(n, n));
  Tensor out = Tensor::zeros({n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = S(i, j);
      if (!std::isfinite(v)) throw std::runtime_error("ppr_matrix: singular diffusion system");
      out.mutable_data()[static_cast<size_t>(i) * n + j] = v;
    }
  }
  return out;
}

}  // namespace lgf

#endif  // LGF_DATA_PPR_HPP_
