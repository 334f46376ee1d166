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
#include <vector>

#include "lgf/core/adam.hpp"
#include "lgf/core/gradcheck.hpp"
#include "lgf/core/gumbel.hpp"
#include "lgf/core/ops.hpp"
#include "lgf/core/params.hpp"
#include "lgf/core/tape.hpp"

using namespace lgf;

TEST_CASE("backward of sum gives ones") {
  Tape tape;
  Tensor x({3}, {5, 6, 7});
  tape.watch(x);
  Tensor loss = sum_all(x);
  tape.backward(loss);
  REQUIRE(tape.grad(x).data() == std::vector<double>{1, 1, 1});
}

TEST_CASE("backward of sum of squares") {
  // Analytic oracle: d/dx sum(x*x) = 2x.
  Tape tape;
  Tensor x({3}, {1, 2, 3});
  tape.watch(x);
  Tensor loss = sum_all(mul(x, x));
  tape.backward(loss);
  REQUIRE(tape.grad(x).data() == std::vector<double>{2, 4, 6});
}

TEST_CASE("constant loss leaves all-zero gradients") {
  Tape tape;
  Tensor x({2}, {1, 2});
  tape.watch(x);
  Tensor c = Tensor::scalar(3.0);
  Tensor watched_c = c;
  tape.watch(watched_c);
  Tensor loss = sum_all(watched_c);
  tape.backward(loss);
  REQUIRE(tape.grad(x).data() == std::vector<double>{0, 0});
}

TEST_CASE("backward rejects non-scalar and off-tape losses") {
  Tape tape;
  Tensor x({2}, {1, 2});
  tape.watch(x);
  Tensor y = mul(x, x);
  REQUIRE_THROWS_WITH(tape.backward(y), Catch::Matchers::ContainsSubstring("scalar"));
  Tensor stray = Tensor::scalar(1.0);
  REQUIRE_THROWS_WITH(tape.backward(stray), Catch::Matchers::ContainsSubstring("not on this tape"));
}

TEST_CASE("two paths to one leaf accumulate") {
  // loss = sum(x*x) + sum(3x) -> grad = 2x + 3, verified analytically.
  Tape tape;
  Tensor x({2}, {1, 4});
  tape.watch(x);
  Tensor loss = add(sum_all(mul(x, x)), sum_all(scale(x, 3.0)));
  tape.backward(loss);
  REQUIRE(tape.grad(x).data() == std::vector<double>{5, 11});
}

TEST_CASE("finite differences across the op catalog") {
  RngStream rng(7);
  auto random_tensor = [&](Shape s) {
    Tensor t = Tensor::zeros(s);
    for (double& v : t.mutable_data()) v = rng.normal();
    return t;
  };
  // Each case: loss built from a single catalog op at 5 random points.
  struct Case {
    const char* name;
    ScalarFn fn;
    std::vector<Shape> shapes;
  };
  std::vector<Case> cases = {
      {"matmul", [](std::vector<Tensor>& p) { return sum_all(tanh_op(matmul(p[0], p[1]))); }, {{3, 4}, {4, 2}}},
      {"bmm", [](std::vector<Tensor>& p) { return sum_all(tanh_op(bmm(p[0], p[1]))); }, {{2, 3, 2}, {2, 2, 3}}},
      {"left_matmul", [](std::vector<Tensor>& p) { return sum_all(tanh_op(left_matmul(p[0], p[1]))); }, {{3, 3}, {2, 3, 2}}},
      {"add_bias", [](std::vector<Tensor>& p) { return sum_all(sigmoid(add(p[0], p[1]))); }, {{3, 4}, {4}}},
      {"sub_mul", [](std::vector<Tensor>& p) { return sum_all(mul(sub(p[0], p[1]), p[0])); }, {{5}, {5}}},
      {"scale_rows", [](std::vector<Tensor>& p) { return sum_all(tanh_op(scale_rows(p[0], p[1]))); }, {{3, 4}, {3, 1}}},
      {"concat", [](std::vector<Tensor>& p) { return sum_all(sigmoid(concat(p[0], p[1]))); }, {{2, 3}, {2, 2}}},
      {"conv1d", [](std::vector<Tensor>& p) { return sum_all(tanh_op(conv1d(p[0], p[1], 2, 2))); }, {{2, 9}, {3, 2, 2}}},
      {"softmax", [](std::vector<Tensor>& p) { return sum_all(mul(softmax(p[0]), p[1])); }, {{3, 4}, {3, 4}}},
      {"relu_leaky", [](std::vector<Tensor>& p) { return sum_all(leaky_relu(relu(p[0]))); }, {{7}}},
      {"reduce", [](std::vector<Tensor>& p) { return sum_all(tanh_op(reduce_mean(reduce_sum(p[0], 1), 0))); }, {{2, 3, 2}}},
      {"gather", [](std::vector<Tensor>& p) { return sum_all(tanh_op(gather_rows(p[0], {2, 0, 2}))); }, {{3, 2}}},
      {"transpose", [](std::vector<Tensor>& p) { return sum_all(tanh_op(matmul(transpose(p[0]), p[0]))); }, {{3, 2}}},
      {"row_normalize", [](std::vector<Tensor>& p) { return sum_all(tanh_op(row_normalize(relu(p[0])))); }, {{4, 4}}},
      {"abs", [](std::vector<Tensor>& p) { return sum_all(abs_op(p[0])); }, {{6}}},
      {"pair_expand", [](std::vector<Tensor>& p) { return sum_all(tanh_op(concat(pair_source(p[0]), pair_target(p[0])))); }, {{3, 2}}},
      {"slice", [](std::vector<Tensor>& p) { return sum_all(tanh_op(slice_last(p[0], 1, 2))); }, {{2, 4}}},
      {"bce", [](std::vector<Tensor>& p) { return sum_all(bce_with_logits(p[0], Tensor::full({5}, 0.3))); }, {{5}}},
  };
  for (const auto& c : cases) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Tensor> params;
      for (const Shape& s : c.shapes) params.push_back(random_tensor(s));
      const double err = finite_difference_check(c.fn, params, 1e-5);
      INFO(c.name << " trial " << trial);
      REQUIRE(err < 1e-4);
    }
  }
}

TEST_CASE("finite_difference_check flags nondeterministic functions") {
  int calls = 0;
  ScalarFn fn = [&calls](std::vector<Tensor>& p) {
    return scale(sum_all(p[0]), static_cast<double>(++calls));
  };
  REQUIRE_THROWS_WITH(finite_difference_check(fn, {Tensor({2}, {1, 2})}, 1e-5),
                      Catch::Matchers::ContainsSubstring("not deterministic"));
}

TEST_CASE("finite_difference_check is exact on linear functions") {
  ScalarFn fn = [](std::vector<Tensor>& p) { return sum_all(p[0]); };
  REQUIRE(finite_difference_check(fn, {Tensor({4}, {1, 2, 3, 4})}, 1e-5) < 1e-10);
}

TEST_CASE("adam zero gradient is identity") {
  Tensor p({3}, {1, 2, 3});
  ParamSet ps;
  ps.add("p", p);
  AdamState st;
  adam_step(ps, {Tensor::zeros({3})}, st);
  REQUIRE(p.data() == std::vector<double>{1, 2, 3});
  REQUIRE(st.step_count == 1);
}

TEST_CASE("adam first step is bias-corrected") {
  // Hand computation: g=1 at step 1 gives update lr * 1 / (1 + eps) ~ lr.
  Tensor p({1}, {0.0});
  ParamSet ps;
  ps.add("p", p);
  AdamState st;
  st.lr = 0.1;
  adam_step(ps, {Tensor({1}, {1.0})}, st);
  REQUIRE(p(0) == Catch::Approx(-0.1).epsilon(1e-6));
  adam_step(ps, {Tensor({1}, {1.0})}, st);
  REQUIRE(st.step_count == 2);
}

TEST_CASE("adam rejects shape mismatch") {
  Tensor p({2}, {0, 0});
  ParamSet ps;
  ps.add("p", p);
  AdamState st;
  REQUIRE_THROWS_AS(adam_step(ps, {Tensor({3}, {0, 0, 0})}, st), std::invalid_argument);
}

TEST_CASE("gumbel softmax saturated logits") {
  RngStream rng(1);
  Tensor logits({2}, {50, -50});
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    Tensor s = gumbel_softmax(logits, 0.5, true, rng);
    if (s(0) == 1.0) ++hits;
  }
  REQUIRE(hits == 1000);
}

TEST_CASE("gumbel softmax symmetric logits frequency") {
  // Binomial oracle: p=0.5, n=10000, tolerance 4*sqrt(0.25/n).
  RngStream rng(2);
  Tensor logits({2}, {0, 0});
  int hits = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Tensor s = gumbel_softmax(logits, 0.5, true, rng);
    if (s(0) == 1.0) ++hits;
  }
  const double freq = static_cast<double>(hits) / n;
  REQUIRE(std::fabs(freq - 0.5) <= 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("hard gumbel emits one-hot rows; soft rows sum to 1") {
  RngStream rng(3);
  Tensor logits = Tensor::zeros({6, 4});
  for (double& v : logits.mutable_data()) v = rng.normal();
  Tensor hard = gumbel_softmax(logits, 0.5, true, rng);
  for (int r = 0; r < 6; ++r) {
    int ones = 0;
    double sum = 0;
    for (int c = 0; c < 4; ++c) {
      if (hard(r, c) == 1.0) ++ones;
      sum += hard(r, c);
    }
    REQUIRE(ones == 1);
    REQUIRE(sum == 1.0);
  }
  Tensor soft = gumbel_softmax(logits, 0.5, false, rng);
  for (int r = 0; r < 6; ++r) {
    double sum = 0;
    for (int c = 0; c < 4; ++c) sum += soft(r, c);
    REQUIRE(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("gumbel rejects non-positive temperature") {
  RngStream rng(4);
  Tensor logits({2}, {0, 0});
  REQUIRE_THROWS_AS(gumbel_softmax(logits, 0.0, true, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(gumbel_bernoulli(Tensor({1}, {0.5}), -1.0, rng), std::invalid_argument);
}

TEST_CASE("straight-through gumbel passes gradients to the soft path") {
  // Frozen noise: rebuild the same stream for every evaluation.
  ScalarFn fn = [](std::vector<Tensor>& p) {
    RngStream frozen(99);
    Tensor soft = gumbel_softmax(p[0], 0.7, false, frozen);
    return sum_all(mul(soft, soft));
  };
  Tensor logits({2, 3}, {0.3, -0.2, 0.8, 0.1, 0.0, -0.5});
  REQUIRE(finite_difference_check(fn, {logits}, 1e-5) < 1e-4);
}

TEST_CASE("gumbel bernoulli extremes are deterministic") {
  RngStream rng(5);
  Tensor theta({2}, {1.0, 0.0});
  for (int i = 0; i < 100; ++i) {
    Tensor s = gumbel_bernoulli(theta, 0.5, rng);
    REQUIRE(s(0) == 1.0);
    REQUIRE(s(1) == 0.0);
  }
}

TEST_CASE("params snapshot/restore and blob roundtrip") {
  RngStream rng(6);
  Tensor a = glorot({3, 2}, rng);
  Tensor b = uniform_init({4}, -1, 1, rng);
  ParamSet ps;
  ps.add("a", a);
  ps.add("b", b);
  auto snap = ps.snapshot();
  a.mutable_data()[0] += 5.0;
  ps.restore(snap);
  REQUIRE(a.data() == snap[0].data());

  ps.save("/tmp/lgf_test_params.bin", "/tmp/lgf_test_params.manifest");
  a.mutable_data()[0] = -123.0;
  ps.load("/tmp/lgf_test_params.bin");
  REQUIRE(a.data() == snap[0].data());
}
