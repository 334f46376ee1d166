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

#include "lgf/core/apply.hpp"
#include "lgf/core/ops.hpp"
#include "lgf/core/rng.hpp"

using namespace lgf;

TEST_CASE("matmul identity") {
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor out = matmul(a, Tensor::identity(2));
  REQUIRE(out.data() == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("matmul shape error names dims") {
  Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor b({2, 2}, {1, 0, 0, 1});
  REQUIRE_THROWS_WITH(matmul(a, b), Catch::Matchers::ContainsSubstring("inner dims"));
}

TEST_CASE("softmax of equal logits is uniform") {
  Tensor x({3}, {0, 0, 0});
  Tensor y = softmax(x);
  for (int i = 0; i < 3; ++i) REQUIRE(y(i) == Catch::Approx(1.0 / 3));
}

TEST_CASE("softmax rows are a distribution") {
  RngStream rng(3);
  Tensor x = Tensor::zeros({5, 7});
  for (double& v : x.mutable_data()) v = rng.normal() * 3;
  Tensor y = softmax(x);
  for (int r = 0; r < 5; ++r) {
    double sum = 0;
    for (int c = 0; c < 7; ++c) {
      REQUIRE(y(r, c) >= 0.0);
      sum += y(r, c);
    }
    REQUIRE(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("conv1d sliding sum") {
  // Hand-evaluated oracle: kernel [1,1], stride 1 -> pairwise sums.
  Tensor x({1, 4}, {1, 2, 3, 4});
  Tensor w({1, 1, 2}, {1, 1});
  Tensor y = conv1d(x, w);
  REQUIRE(y.data() == std::vector<double>{3, 5, 7});
}

TEST_CASE("conv1d rejects oversized kernels") {
  Tensor x({1, 3}, {1, 2, 3});
  Tensor w({1, 1, 5}, {1, 1, 1, 1, 1});
  REQUIRE_THROWS_WITH(conv1d(x, w), Catch::Matchers::ContainsSubstring("kernel span"));
}

TEST_CASE("conv1d stride and dilation") {
  Tensor x({1, 6}, {1, 2, 3, 4, 5, 6});
  Tensor w({1, 1, 2}, {1, 1});
  Tensor strided = conv1d(x, w, /*stride=*/2);
  REQUIRE(strided.data() == std::vector<double>{3, 7, 11});
  Tensor dilated = conv1d(x, w, /*stride=*/1, /*dilation=*/2);
  REQUIRE(dilated.data() == std::vector<double>{4, 6, 8, 10});
}

TEST_CASE("concat and slice roundtrip") {
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor b({2, 1}, {9, 8});
  Tensor c = concat(a, b);
  REQUIRE(c.shape() == Shape{2, 3});
  REQUIRE(c.data() == std::vector<double>{1, 2, 9, 3, 4, 8});
  REQUIRE(slice_last(c, 0, 2).data() == a.data());
  REQUIRE(slice_last(c, 2, 1).data() == b.data());
}

TEST_CASE("row_normalize handles zero rows") {
  Tensor A({2, 2}, {0, 0, 2, 2});
  Tensor P = row_normalize(A);
  REQUIRE(P.data() == std::vector<double>{0, 0, 0.5, 0.5});
}

TEST_CASE("gather_rows and embedding lookup") {
  Tensor table({3, 2}, {0, 1, 10, 11, 20, 21});
  Tensor picked = embedding_lookup(table, {2, 0});
  REQUIRE(picked.data() == std::vector<double>{20, 21, 0, 1});
  REQUIRE_THROWS_AS(gather_rows(table, {3}), std::invalid_argument);
}

TEST_CASE("pair layout matches ordered pair indexing") {
  Tensor h({3, 1}, {10, 20, 30});
  Tensor src = pair_source(h);
  Tensor dst = pair_target(h);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      REQUIRE(src(i * 3 + j, 0) == 10.0 * (i + 1));
      REQUIRE(dst(i * 3 + j, 0) == 10.0 * (j + 1));
    }
  }
}

TEST_CASE("left_matmul matches per-batch dense product") {
  RngStream rng(11);
  Tensor A = Tensor::zeros({3, 3});
  Tensor x = Tensor::zeros({2, 3, 4});
  for (double& v : A.mutable_data()) v = rng.normal();
  for (double& v : x.mutable_data()) v = rng.normal();
  Tensor y = left_matmul(A, x);
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 3; ++i) {
      for (int d = 0; d < 4; ++d) {
        double ref = 0;
        for (int k = 0; k < 3; ++k) ref += A(i, k) * x(b, k, d);
        REQUIRE(y(b, i, d) == Catch::Approx(ref).margin(1e-12));
      }
    }
  }
}

TEST_CASE("reductions") {
  Tensor x({2, 3}, {1, 2, 3, 4, 5, 6});
  REQUIRE(reduce_sum(x, 1).data() == std::vector<double>{6, 15});
  REQUIRE(reduce_mean(x, 0).data() == std::vector<double>{2.5, 3.5, 4.5});
  REQUIRE(sum_all(x).value() == 21.0);
  REQUIRE(mean_all(x).value() == Catch::Approx(3.5));
}

TEST_CASE("generic dispatcher rejects unknown ops") {
  REQUIRE_THROWS_WITH(forward("frobnicate", {}), Catch::Matchers::ContainsSubstring("unknown op kind"));
}

TEST_CASE("generic dispatcher agrees with typed wrappers") {
  Tensor a({2, 2}, {1, 2, 3, 4});
  REQUIRE(forward("tanh", {a}).data() == tanh_op(a).data());
  REQUIRE(forward("scale", {a}, {{"factor", 2.0}}).data() == scale(a, 2.0).data());
}

TEST_CASE("dropout is identity at rate 0 and in eval mode") {
  RngStream rng(5);
  Tensor x({4}, {1, 2, 3, 4});
  REQUIRE(dropout(x, 0.0, rng).data() == x.data());
  REQUIRE(dropout(x, 0.5, rng, /*training=*/false).data() == x.data());
}

TEST_CASE("rng streams are deterministic and splittable") {
  RngStream a(42), b(42);
  for (int i = 0; i < 10; ++i) REQUIRE(a.next_u64() == b.next_u64());
  RngStream c1 = a.split(1), c2 = a.split(2);
  REQUIRE(c1.next_u64() != c2.next_u64());
  // Splitting is independent of the parent's counter position.
  RngStream d(42);
  d.next_u64();
  RngStream c1_again = d.split(1);
  RngStream c1_ref = RngStream(42).split(1);
  REQUIRE(c1_again.next_u64() == c1_ref.next_u64());
}
