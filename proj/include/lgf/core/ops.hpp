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

#ifndef LGF_CORE_OPS_HPP_
#define LGF_CORE_OPS_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lgf/core/rng.hpp"
#include "lgf/core/tape.hpp"
#include "lgf/core/tensor.hpp"

namespace lgf {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

namespace detail {

inline void debug_finite(const Tensor& t, const char* op) {
#ifndef NDEBUG
  for (double v : t.data()) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(std::string("non-finite value produced by ") + op);
    }
  }
#endif
  (void)t;
  (void)op;
}

inline void attach(Tensor& out, Tape* tp, const char* op, Tape::PullFn pull) {
  debug_finite(out, op);
  if (tp) {
    out.tape = tp;
    out.requires_grad = true;
    out.node = tp->record(out.shape(), std::move(pull));
  }
}

inline ECMap as_mat(const Tensor& t, int rows, int cols) {
  return ECMap(t.data().data(), rows, cols);
}

/// Leading extent when viewing `t` as [rows x last_dim].
inline int lead(const Tensor& t) {
  check_shape(t.ndim() >= 1, "op requires a non-scalar tensor");
  return t.size() / t.dim(t.ndim() - 1);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementwise binary ops. add() broadcasts `b` when b's shape is a suffix of
// a's shape (the bias case); sub/mul require identical shapes.
// ---------------------------------------------------------------------------

inline bool is_suffix_shape(const Shape& small, const Shape& big) {
  if (small.size() > big.size()) return false;
  for (size_t i = 0; i < small.size(); ++i) {
    if (small[small.size() - 1 - i] != big[big.size() - 1 - i]) return false;
  }
  return true;
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  check_shape(is_suffix_shape(b.shape(), a.shape()),
              "add: shape " + shape_str(b.shape()) + " does not broadcast to " +
                  shape_str(a.shape()));
  const int n = a.size(), m = b.size();
  Tensor out = Tensor::zeros(a.shape());
  {
    auto& o = out.mutable_data();
    const auto& av = a.data();
    const auto& bv = b.data();
    for (int i = 0; i < n; ++i) o[static_cast<size_t>(i)] = av[static_cast<size_t>(i)] + bv[static_cast<size_t>(i % m)];
  }
  Tape* tp = tape_of({&a, &b});
  const int an = a.on_tape() ? a.node : -1;
  const int bn = b.on_tape() ? b.node : -1;
  detail::attach(out, tp, "add", [an, bn, n, m](const std::vector<double>& g, Tape& t) {
    if (an >= 0) t.accumulate(an, g);
    if (bn >= 0) {
      std::vector<double> gb(static_cast<size_t>(m), 0.0);
      for (int i = 0; i < n; ++i) gb[static_cast<size_t>(i % m)] += g[static_cast<size_t>(i)];
      t.accumulate(bn, gb);
    }
  });
  return out;
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
  check_shape(a.shape() == b.shape(), "sub: shapes differ " + shape_str(a.shape()) +
                                          " vs " + shape_str(b.shape()));
  const int n = a.size();
  Tensor out = Tensor::zeros(a.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) o[static_cast<size_t>(i)] = a.data()[static_cast<size_t>(i)] - b.data()[static_cast<size_t>(i)];
  }
  Tape* tp = tape_of({&a, &b});
  const int an = a.on_tape() ? a.node : -1;
  const int bn = b.on_tape() ? b.node : -1;
  detail::attach(out, tp, "sub", [an, bn, n](const std::vector<double>& g, Tape& t) {
    if (an >= 0) t.accumulate(an, g);
    if (bn >= 0) {
      std::vector<double> gb(g.size());
      for (int i = 0; i < n; ++i) gb[static_cast<size_t>(i)] = -g[static_cast<size_t>(i)];
      t.accumulate(bn, gb);
    }
  });
  return out;
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
  check_shape(a.shape() == b.shape(), "mul: shapes differ " + shape_str(a.shape()) +
                                          " vs " + shape_str(b.shape()));
  const int n = a.size();
  Tensor out = Tensor::zeros(a.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) o[static_cast<size_t>(i)] = a.data()[static_cast<size_t>(i)] * b.data()[static_cast<size_t>(i)];
  }
  Tape* tp = tape_of({&a, &b});
  const int an = a.on_tape() ? a.node : -1;
  const int bn = b.on_tape() ? b.node : -1;
  detail::attach(out, tp, "mul", [a, b, an, bn, n](const std::vector<double>& g, Tape& t) {
    std::vector<double> tmp(static_cast<size_t>(n));
    if (an >= 0) {
      for (int i = 0; i < n; ++i) tmp[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * b.data()[static_cast<size_t>(i)];
      t.accumulate(an, tmp);
    }
    if (bn >= 0) {
      for (int i = 0; i < n; ++i) tmp[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * a.data()[static_cast<size_t>(i)];
      t.accumulate(bn, tmp);
    }
  });
  return out;
}

inline Tensor scale(const Tensor& a, double c) {
  const int n = a.size();
  Tensor out = Tensor::zeros(a.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) o[static_cast<size_t>(i)] = c * a.data()[static_cast<size_t>(i)];
  }
  Tape* tp = tape_of({&a});
  const int an = a.on_tape() ? a.node : -1;
  detail::attach(out, tp, "scale", [an, c, n](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double> ga(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) ga[static_cast<size_t>(i)] = c * g[static_cast<size_t>(i)];
      t.accumulate(an, ga);
    }
  });
  return out;
}

/// Multiplies each trailing vector of `a` by the matching scalar in `s`
/// (s has a's shape with last extent 1).
inline Tensor scale_rows(const Tensor& a, const Tensor& s) {
  const int d = a.dim(a.ndim() - 1);
  const int rows = detail::lead(a);
  check_shape(s.size() == rows, "scale_rows: scalar count " + std::to_string(s.size()) +
                                    " != row count " + std::to_string(rows));
  Tensor out = Tensor::zeros(a.shape());
  {
    auto& o = out.mutable_data();
    for (int r = 0; r < rows; ++r) {
      const double c = s.data()[static_cast<size_t>(r)];
      for (int j = 0; j < d; ++j) {
        o[static_cast<size_t>(r) * d + j] = c * a.data()[static_cast<size_t>(r) * d + j];
      }
    }
  }
  Tape* tp = tape_of({&a, &s});
  const int an = a.on_tape() ? a.node : -1;
  const int sn = s.on_tape() ? s.node : -1;
  detail::attach(out, tp, "scale_rows", [a, s, an, sn, rows, d](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double> ga(a.data().size());
      for (int r = 0; r < rows; ++r) {
        const double c = s.data()[static_cast<size_t>(r)];
        for (int j = 0; j < d; ++j) ga[static_cast<size_t>(r) * d + j] = c * g[static_cast<size_t>(r) * d + j];
      }
      t.accumulate(an, ga);
    }
    if (sn >= 0) {
      std::vector<double> gs(static_cast<size_t>(rows), 0.0);
      for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += g[static_cast<size_t>(r) * d + j] * a.data()[static_cast<size_t>(r) * d + j];
        gs[static_cast<size_t>(r)] = acc;
      }
      t.accumulate(sn, gs);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Matrix products.
// ---------------------------------------------------------------------------

/// a: [..., m, k] (leading dims flattened), b: [k, n] -> [..., m, n].
inline Tensor matmul(const Tensor& a, const Tensor& b) {
  check_shape(a.ndim() >= 2 && b.ndim() == 2, "matmul: need [.,m,k] x [k,n], got " +
                                                  shape_str(a.shape()) + " x " +
                                                  shape_str(b.shape()));
  const int k = a.dim(a.ndim() - 1);
  check_shape(k == b.dim(0), "matmul: inner dims disagree, " + shape_str(a.shape()) +
                                 " x " + shape_str(b.shape()));
  const int m = a.size() / k;
  const int n = b.dim(1);
  Shape out_shape(a.shape().begin(), a.shape().end() - 1);
  out_shape.push_back(n);
  Tensor out = Tensor::zeros(out_shape);
  EMap(out.mutable_data().data(), m, n) = detail::as_mat(a, m, k) * detail::as_mat(b, k, n);
  Tape* tp = tape_of({&a, &b});
  const int an = a.on_tape() ? a.node : -1;
  const int bn = b.on_tape() ? b.node : -1;
  detail::attach(out, tp, "matmul", [a, b, an, bn, m, k, n](const std::vector<double>& g, Tape& t) {
    ECMap gm(g.data(), m, n);
    if (an >= 0) {
      std::vector<double> ga(static_cast<size_t>(m) * k);
      EMap(ga.data(), m, k) = gm * detail::as_mat(b, k, n).transpose();
      t.accumulate(an, ga);
    }
    if (bn >= 0) {
      std::vector<double> gb(static_cast<size_t>(k) * n);
      EMap(gb.data(), k, n) = detail::as_mat(a, m, k).transpose() * gm;
      t.accumulate(bn, gb);
    }
  });
  return out;
}

/// Batched product with a shared left matrix: A: [m, k], x: [B, k, d] -> [B, m, d].
inline Tensor left_matmul(const Tensor& A, const Tensor& x) {
  check_shape(A.ndim() == 2 && x.ndim() == 3 && A.dim(1) == x.dim(1),
              "left_matmul: need [m,k] x [B,k,d], got " + shape_str(A.shape()) +
                  " x " + shape_str(x.shape()));
  const int m = A.dim(0), k = A.dim(1), B = x.dim(0), d = x.dim(2);
  Tensor out = Tensor::zeros({B, m, d});
  {
    ECMap Am(A.data().data(), m, k);
    auto& o = out.mutable_data();
    for (int b = 0; b < B; ++b) {
      ECMap xb(x.data().data() + static_cast<size_t>(b) * k * d, k, d);
      EMap(o.data() + static_cast<size_t>(b) * m * d, m, d) = Am * xb;
    }
  }
  Tape* tp = tape_of({&A, &x});
  const int An = A.on_tape() ? A.node : -1;
  const int xn = x.on_tape() ? x.node : -1;
  detail::attach(out, tp, "left_matmul", [A, x, An, xn, m, k, B, d](const std::vector<double>& g, Tape& t) {
    ECMap Am(A.data().data(), m, k);
    if (An >= 0) {
      std::vector<double> gA(static_cast<size_t>(m) * k, 0.0);
      EMap gAm(gA.data(), m, k);
      for (int b = 0; b < B; ++b) {
        ECMap gb(g.data() + static_cast<size_t>(b) * m * d, m, d);
        ECMap xb(x.data().data() + static_cast<size_t>(b) * k * d, k, d);
        gAm += gb * xb.transpose();
      }
      t.accumulate(An, gA);
    }
    if (xn >= 0) {
      std::vector<double> gx(x.data().size());
      for (int b = 0; b < B; ++b) {
        ECMap gb(g.data() + static_cast<size_t>(b) * m * d, m, d);
        EMap(gx.data() + static_cast<size_t>(b) * k * d, k, d) = Am.transpose() * gb;
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

/// Fully batched product: a: [B, m, k], b: [B, k, n] -> [B, m, n].
inline Tensor bmm(const Tensor& a, const Tensor& b) {
  check_shape(a.ndim() == 3 && b.ndim() == 3 && a.dim(0) == b.dim(0) &&
                  a.dim(2) == b.dim(1),
              "bmm: need [B,m,k] x [B,k,n], got " + shape_str(a.shape()) + " x " +
                  shape_str(b.shape()));
  const int B = a.dim(0), m = a.dim(1), k = a.dim(2), n = b.dim(2);
  Tensor out = Tensor::zeros({B, m, n});
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < B; ++i) {
      ECMap am(a.data().data() + static_cast<size_t>(i) * m * k, m, k);
      ECMap bm(b.data().data() + static_cast<size_t>(i) * k * n, k, n);
      EMap(o.data() + static_cast<size_t>(i) * m * n, m, n) = am * bm;
    }
  }
  Tape* tp = tape_of({&a, &b});
  const int an = a.on_tape() ? a.node : -1;
  const int bn = b.on_tape() ? b.node : -1;
  detail::attach(out, tp, "bmm", [a, b, an, bn, B, m, k, n](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double> ga(a.data().size());
      for (int i = 0; i < B; ++i) {
        ECMap gm(g.data() + static_cast<size_t>(i) * m * n, m, n);
        ECMap bm(b.data().data() + static_cast<size_t>(i) * k * n, k, n);
        EMap(ga.data() + static_cast<size_t>(i) * m * k, m, k) = gm * bm.transpose();
      }
      t.accumulate(an, ga);
    }
    if (bn >= 0) {
      std::vector<double> gb(b.data().size());
      for (int i = 0; i < B; ++i) {
        ECMap gm(g.data() + static_cast<size_t>(i) * m * n, m, n);
        ECMap am(a.data().data() + static_cast<size_t>(i) * m * k, m, k);
        EMap(gb.data() + static_cast<size_t>(i) * k * n, k, n) = am.transpose() * gm;
      }
      t.accumulate(bn, gb);
    }
  });
  return out;
}

inline Tensor transpose(const Tensor& a) {
  check_shape(a.ndim() == 2, "transpose: need a matrix, got " + shape_str(a.shape()));
  const int m = a.dim(0), n = a.dim(1);
  Tensor out = Tensor::zeros({n, m});
  EMap(out.mutable_data().data(), n, m) = detail::as_mat(a, m, n).transpose();
  Tape* tp = tape_of({&a});
  const int an = a.on_tape() ? a.node : -1;
  detail::attach(out, tp, "transpose", [an, m, n](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double> ga(static_cast<size_t>(m) * n);
      EMap(ga.data(), m, n) = ECMap(g.data(), n, m).transpose();
      t.accumulate(an, ga);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Shape plumbing.
// ---------------------------------------------------------------------------

inline Tensor reshape(const Tensor& a, Shape new_shape) {
  check_shape(numel(new_shape) == a.size(), "reshape: " + shape_str(a.shape()) +
                                                " -> " + shape_str(new_shape) +
                                                " changes element count");
  Tensor out(new_shape, a.data());
  Tape* tp = tape_of({&a});
  const int an = a.on_tape() ? a.node : -1;
  detail::attach(out, tp, "reshape", [an](const std::vector<double>& g, Tape& t) {
    if (an >= 0) t.accumulate(an, g);
  });
  return out;
}

/// Concatenation along the last axis.
inline Tensor concat(const std::vector<Tensor>& parts) {
  check_shape(!parts.empty(), "concat: no inputs");
  const Tensor& first = parts[0];
  Shape lead_shape(first.shape().begin(), first.shape().end() - 1);
  int total_last = 0;
  for (const Tensor& p : parts) {
    check_shape(p.ndim() == first.ndim() &&
                    Shape(p.shape().begin(), p.shape().end() - 1) == lead_shape,
                "concat: leading dims differ, " + shape_str(first.shape()) + " vs " +
                    shape_str(p.shape()));
    total_last += p.dim(p.ndim() - 1);
  }
  const int rows = detail::lead(first);
  Shape out_shape = lead_shape;
  out_shape.push_back(total_last);
  Tensor out = Tensor::zeros(out_shape);
  {
    auto& o = out.mutable_data();
    int off = 0;
    for (const Tensor& p : parts) {
      const int d = p.dim(p.ndim() - 1);
      for (int r = 0; r < rows; ++r) {
        std::copy_n(p.data().data() + static_cast<size_t>(r) * d, d,
                    o.data() + static_cast<size_t>(r) * total_last + off);
      }
      off += d;
    }
  }
  Tape* tp = nullptr;
  for (const Tensor& p : parts) {
    if (p.on_tape()) tp = p.tape;
  }
  std::vector<int> nodes;
  std::vector<int> widths;
  for (const Tensor& p : parts) {
    nodes.push_back(p.on_tape() ? p.node : -1);
    widths.push_back(p.dim(p.ndim() - 1));
  }
  detail::attach(out, tp, "concat", [nodes, widths, rows, total_last](const std::vector<double>& g, Tape& t) {
    int off = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const int d = widths[i];
      if (nodes[i] >= 0) {
        std::vector<double> gp(static_cast<size_t>(rows) * d);
        for (int r = 0; r < rows; ++r) {
          std::copy_n(g.data() + static_cast<size_t>(r) * total_last + off, d,
                      gp.data() + static_cast<size_t>(r) * d);
        }
        t.accumulate(nodes[i], gp);
      }
      off += d;
    }
  });
  return out;
}

inline Tensor concat(const Tensor& a, const Tensor& b) { return concat(std::vector<Tensor>{a, b}); }

/// Slice [start, start+len) of the last axis.
inline Tensor slice_last(const Tensor& a, int start, int len) {
  const int d = a.dim(a.ndim() - 1);
  check_shape(start >= 0 && len > 0 && start + len <= d,
              "slice_last: [" + std::to_string(start) + "," + std::to_string(start + len) +
                  ") out of range for last dim " + std::to_string(d));
  const int rows = detail::lead(a);
  Shape out_shape(a.shape().begin(), a.shape().end() - 1);
  out_shape.push_back(len);
  Tensor out = Tensor::zeros(out_shape);
  {
    auto& o = out.mutable_data();
    for (int r = 0; r < rows; ++r) {
      std::copy_n(a.data().data() + static_cast<size_t>(r) * d + start, len,
                  o.data() + static_cast<size_t>(r) * len);
    }
  }
  Tape* tp = tape_of({&a});
  const int an = a.on_tape() ? a.node : -1;
  const size_t asize = a.data().size();
  detail::attach(out, tp, "slice_last", [an, rows, d, start, len, asize](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double> ga(asize, 0.0);
      for (int r = 0; r < rows; ++r) {
        std::copy_n(g.data() + static_cast<size_t>(r) * len, len,
                    ga.data() + static_cast<size_t>(r) * d + start);
      }
      t.accumulate(an, ga);
    }
  });
  return out;
}

/// Replicates x (any shape) along a fresh leading batch axis.
inline Tensor expand_batch(const Tensor& x, int B) {
  check_shape(B >= 1, "expand_batch: batch must be positive");
  Shape out_shape;
  out_shape.push_back(B);
  for (int d : x.shape()) out_shape.push_back(d);
  const int n = x.size();
  Tensor out = Tensor::zeros(out_shape);
  {
    auto& o = out.mutable_data();
    for (int b = 0; b < B; ++b) std::copy_n(x.data().data(), n, o.data() + static_cast<size_t>(b) * n);
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  detail::attach(out, tp, "expand_batch", [xn, B, n](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(static_cast<size_t>(n), 0.0);
      for (int b = 0; b < B; ++b) {
        for (int i = 0; i < n; ++i) gx[static_cast<size_t>(i)] += g[static_cast<size_t>(b) * n + i];
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Node-pair layout helpers: [.., N, d] -> [.., N*N, d], with ordered pair
// p = i*N + j. pair_source repeats row i, pair_target tiles row j.
// ---------------------------------------------------------------------------

namespace detail {

inline Tensor pair_expand(const Tensor& x, bool source, const char* name) {
  check_shape(x.ndim() == 2 || x.ndim() == 3, std::string(name) + ": need [N,d] or [B,N,d]");
  const bool batched = x.ndim() == 3;
  const int B = batched ? x.dim(0) : 1;
  const int N = x.dim(batched ? 1 : 0);
  const int d = x.dim(batched ? 2 : 1);
  Shape out_shape = batched ? Shape{B, N * N, d} : Shape{N * N, d};
  Tensor out = Tensor::zeros(out_shape);
  {
    auto& o = out.mutable_data();
    for (int b = 0; b < B; ++b) {
      const double* xb = x.data().data() + static_cast<size_t>(b) * N * d;
      double* ob = o.data() + static_cast<size_t>(b) * N * N * d;
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
          const int row = source ? i : j;
          std::copy_n(xb + static_cast<size_t>(row) * d, d,
                      ob + (static_cast<size_t>(i) * N + j) * d);
        }
      }
    }
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  const size_t xsize = x.data().size();
  detail::attach(out, tp, name, [xn, B, N, d, source, xsize](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(xsize, 0.0);
      for (int b = 0; b < B; ++b) {
        const double* gb = g.data() + static_cast<size_t>(b) * N * N * d;
        double* gxb = gx.data() + static_cast<size_t>(b) * N * d;
        for (int i = 0; i < N; ++i) {
          for (int j = 0; j < N; ++j) {
            const int row = source ? i : j;
            const double* src = gb + (static_cast<size_t>(i) * N + j) * d;
            double* dst = gxb + static_cast<size_t>(row) * d;
            for (int c = 0; c < d; ++c) dst[c] += src[c];
          }
        }
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

}  // namespace detail

inline Tensor pair_source(const Tensor& x) { return detail::pair_expand(x, true, "pair_source"); }
inline Tensor pair_target(const Tensor& x) { return detail::pair_expand(x, false, "pair_target"); }

// ---------------------------------------------------------------------------
// 1-D convolution, no padding. x: [C_in, L] or [B, C_in, L],
// w: [C_out, C_in, k].
// ---------------------------------------------------------------------------

inline int conv1d_output_length(int L, int k, int stride, int dilation) {
  const int span = (k - 1) * dilation + 1;
  return span > L ? 0 : (L - span) / stride + 1;
}

inline Tensor conv1d(const Tensor& x, const Tensor& w, int stride = 1, int dilation = 1) {
  check_shape(w.ndim() == 3, "conv1d: kernel must be [C_out,C_in,k], got " + shape_str(w.shape()));
  check_shape(x.ndim() == 2 || x.ndim() == 3, "conv1d: input must be [C,L] or [B,C,L], got " + shape_str(x.shape()));
  check_shape(stride >= 1 && dilation >= 1, "conv1d: stride and dilation must be positive");
  const bool batched = x.ndim() == 3;
  const int B = batched ? x.dim(0) : 1;
  const int Cin = x.dim(batched ? 1 : 0);
  const int L = x.dim(batched ? 2 : 1);
  const int Cout = w.dim(0), k = w.dim(2);
  check_shape(Cin == w.dim(1), "conv1d: channel mismatch, input " + shape_str(x.shape()) +
                                   " vs kernel " + shape_str(w.shape()));
  const int Lout = conv1d_output_length(L, k, stride, dilation);
  check_shape(Lout >= 1, "conv1d: kernel span exceeds input length " + std::to_string(L));
  Shape out_shape = batched ? Shape{B, Cout, Lout} : Shape{Cout, Lout};
  Tensor out = Tensor::zeros(out_shape);
  {
    auto& o = out.mutable_data();
    for (int b = 0; b < B; ++b) {
      const double* xb = x.data().data() + static_cast<size_t>(b) * Cin * L;
      double* ob = o.data() + static_cast<size_t>(b) * Cout * Lout;
      for (int co = 0; co < Cout; ++co) {
        for (int t = 0; t < Lout; ++t) {
          double acc = 0.0;
          for (int ci = 0; ci < Cin; ++ci) {
            const double* xc = xb + static_cast<size_t>(ci) * L + t * stride;
            const double* wc = w.data().data() + (static_cast<size_t>(co) * Cin + ci) * k;
            for (int j = 0; j < k; ++j) acc += wc[j] * xc[static_cast<size_t>(j) * dilation];
          }
          ob[static_cast<size_t>(co) * Lout + t] = acc;
        }
      }
    }
  }
  Tape* tp = tape_of({&x, &w});
  const int xn = x.on_tape() ? x.node : -1;
  const int wn = w.on_tape() ? w.node : -1;
  detail::attach(out, tp, "conv1d", [x, w, xn, wn, B, Cin, Cout, L, Lout, k, stride, dilation](
                                        const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(x.data().size(), 0.0);
      for (int b = 0; b < B; ++b) {
        const double* gb = g.data() + static_cast<size_t>(b) * Cout * Lout;
        double* gxb = gx.data() + static_cast<size_t>(b) * Cin * L;
        for (int co = 0; co < Cout; ++co) {
          for (int tt = 0; tt < Lout; ++tt) {
            const double gv = gb[static_cast<size_t>(co) * Lout + tt];
            for (int ci = 0; ci < Cin; ++ci) {
              const double* wc = w.data().data() + (static_cast<size_t>(co) * Cin + ci) * k;
              double* xc = gxb + static_cast<size_t>(ci) * L + tt * stride;
              for (int j = 0; j < k; ++j) xc[static_cast<size_t>(j) * dilation] += gv * wc[j];
            }
          }
        }
      }
      t.accumulate(xn, gx);
    }
    if (wn >= 0) {
      std::vector<double> gw(w.data().size(), 0.0);
      for (int b = 0; b < B; ++b) {
        const double* gb = g.data() + static_cast<size_t>(b) * Cout * Lout;
        const double* xb = x.data().data() + static_cast<size_t>(b) * Cin * L;
        for (int co = 0; co < Cout; ++co) {
          for (int tt = 0; tt < Lout; ++tt) {
            const double gv = gb[static_cast<size_t>(co) * Lout + tt];
            for (int ci = 0; ci < Cin; ++ci) {
              const double* xc = xb + static_cast<size_t>(ci) * L + tt * stride;
              double* wc = gw.data() + (static_cast<size_t>(co) * Cin + ci) * k;
              for (int j = 0; j < k; ++j) wc[j] += gv * xc[static_cast<size_t>(j) * dilation];
            }
          }
        }
      }
      t.accumulate(wn, gw);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise nonlinearities.
// ---------------------------------------------------------------------------

namespace detail {

/// dfy(x_i, y_i) must return dy_i/dx_i.
template <class F, class DF>
Tensor unary_op(const Tensor& x, const char* name, F f, DF dfy) {
  const int n = x.size();
  Tensor out = Tensor::zeros(x.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) o[static_cast<size_t>(i)] = f(x.data()[static_cast<size_t>(i)]);
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  const Tensor y = out.detach();
  detail::attach(out, tp, name, [x, y, xn, n, dfy](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        gx[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * dfy(x.data()[static_cast<size_t>(i)], y.data()[static_cast<size_t>(i)]);
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

}  // namespace detail

inline Tensor sigmoid(const Tensor& x) {
  return detail::unary_op(
      x, "sigmoid",
      [](double v) { return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); },
      [](double, double y) { return y * (1.0 - y); });
}

inline Tensor tanh_op(const Tensor& x) {
  return detail::unary_op(x, "tanh", [](double v) { return std::tanh(v); },
                          [](double, double y) { return 1.0 - y * y; });
}

inline Tensor relu(const Tensor& x) {
  return detail::unary_op(x, "relu", [](double v) { return v > 0 ? v : 0.0; },
                          [](double v, double) { return v > 0 ? 1.0 : 0.0; });
}

inline Tensor leaky_relu(const Tensor& x, double slope = 0.2) {
  return detail::unary_op(x, "leaky_relu",
                          [slope](double v) { return v > 0 ? v : slope * v; },
                          [slope](double v, double) { return v > 0 ? 1.0 : slope; });
}

/// |x| as a primitive with sign gradient (0 at 0).
inline Tensor abs_op(const Tensor& x) {
  return detail::unary_op(x, "abs", [](double v) { return std::fabs(v); },
                          [](double v, double) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
}

// ---------------------------------------------------------------------------
// Softmax over the last axis.
// ---------------------------------------------------------------------------

inline Tensor softmax(const Tensor& x) {
  const int d = x.dim(x.ndim() - 1);
  const int rows = detail::lead(x);
  Tensor out = Tensor::zeros(x.shape());
  {
    auto& o = out.mutable_data();
    for (int r = 0; r < rows; ++r) {
      const double* xr = x.data().data() + static_cast<size_t>(r) * d;
      double* orow = o.data() + static_cast<size_t>(r) * d;
      double mx = xr[0];
      for (int i = 1; i < d; ++i) mx = std::max(mx, xr[i]);
      double sum = 0.0;
      for (int i = 0; i < d; ++i) {
        orow[i] = std::exp(xr[i] - mx);
        sum += orow[i];
      }
      for (int i = 0; i < d; ++i) orow[i] /= sum;
    }
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  const Tensor y = out.detach();
  detail::attach(out, tp, "softmax", [y, xn, rows, d](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(static_cast<size_t>(rows) * d);
      for (int r = 0; r < rows; ++r) {
        const double* yr = y.data().data() + static_cast<size_t>(r) * d;
        const double* gr = g.data() + static_cast<size_t>(r) * d;
        double dot = 0.0;
        for (int i = 0; i < d; ++i) dot += yr[i] * gr[i];
        for (int i = 0; i < d; ++i) gx[static_cast<size_t>(r) * d + i] = yr[i] * (gr[i] - dot);
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reductions.
// ---------------------------------------------------------------------------

namespace detail {

inline Tensor reduce(const Tensor& x, int axis, bool mean, const char* name) {
  check_shape(axis >= 0 && axis < x.ndim(), std::string(name) + ": axis " + std::to_string(axis) +
                                                " out of range for " + shape_str(x.shape()));
  int outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= x.dim(i);
  for (int i = axis + 1; i < x.ndim(); ++i) inner *= x.dim(i);
  const int red = x.dim(axis);
  Shape out_shape;
  for (int i = 0; i < x.ndim(); ++i) {
    if (i != axis) out_shape.push_back(x.dim(i));
  }
  Tensor out = Tensor::zeros(out_shape);
  const double w = mean ? 1.0 / red : 1.0;
  {
    auto& o = out.mutable_data();
    for (int a = 0; a < outer; ++a) {
      for (int r = 0; r < red; ++r) {
        const double* src = x.data().data() + (static_cast<size_t>(a) * red + r) * inner;
        double* dst = o.data() + static_cast<size_t>(a) * inner;
        for (int i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
    }
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  detail::attach(out, tp, name, [xn, outer, red, inner, w](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(static_cast<size_t>(outer) * red * inner);
      for (int a = 0; a < outer; ++a) {
        for (int r = 0; r < red; ++r) {
          double* dst = gx.data() + (static_cast<size_t>(a) * red + r) * inner;
          const double* src = g.data() + static_cast<size_t>(a) * inner;
          for (int i = 0; i < inner; ++i) dst[i] = w * src[i];
        }
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

}  // namespace detail

inline Tensor reduce_sum(const Tensor& x, int axis) { return detail::reduce(x, axis, false, "reduce_sum"); }
inline Tensor reduce_mean(const Tensor& x, int axis) { return detail::reduce(x, axis, true, "reduce_mean"); }

inline Tensor sum_all(const Tensor& x) {
  const int n = x.size();
  double s = 0.0;
  for (double v : x.data()) s += v;
  Tensor out = Tensor::scalar(s);
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  detail::attach(out, tp, "sum", [xn, n](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(static_cast<size_t>(n), g[0]);
      t.accumulate(xn, gx);
    }
  });
  return out;
}

inline Tensor mean_all(const Tensor& x) { return scale(sum_all(x), 1.0 / x.size()); }

// ---------------------------------------------------------------------------
// Row gather / embedding lookup.
// ---------------------------------------------------------------------------

inline Tensor gather_rows(const Tensor& x, const std::vector<int>& idx) {
  check_shape(x.ndim() >= 2, "gather_rows: need at least 2-D input, got " + shape_str(x.shape()));
  const int m = x.dim(0);
  const int row = x.size() / m;
  for (int i : idx) {
    check_shape(i >= 0 && i < m, "gather_rows: index " + std::to_string(i) +
                                     " out of range [0," + std::to_string(m) + ")");
  }
  Shape out_shape = x.shape();
  out_shape[0] = static_cast<int>(idx.size());
  Tensor out = Tensor::zeros(out_shape);
  {
    auto& o = out.mutable_data();
    for (size_t r = 0; r < idx.size(); ++r) {
      std::copy_n(x.data().data() + static_cast<size_t>(idx[r]) * row, row, o.data() + r * row);
    }
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  const size_t xsize = x.data().size();
  detail::attach(out, tp, "gather_rows", [xn, idx, row, xsize](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(xsize, 0.0);
      for (size_t r = 0; r < idx.size(); ++r) {
        const double* src = g.data() + r * row;
        double* dst = gx.data() + static_cast<size_t>(idx[r]) * row;
        for (int i = 0; i < row; ++i) dst[i] += src[i];
      }
      t.accumulate(xn, gx);
    }
  });
  return out;
}

/// Embedding lookup is a row gather over the embedding table.
inline Tensor embedding_lookup(const Tensor& table, const std::vector<int>& ids) {
  return gather_rows(table, ids);
}

// ---------------------------------------------------------------------------
// Dropout (train-time only; inverted scaling).
// ---------------------------------------------------------------------------

inline Tensor dropout(const Tensor& x, double rate, RngStream& rng, bool training = true) {
  check_shape(rate >= 0.0 && rate < 1.0, "dropout: rate must be in [0,1)");
  if (!training || rate == 0.0) return x;
  const int n = x.size();
  std::vector<double> mask(static_cast<size_t>(n));
  const double keep = 1.0 - rate;
  for (int i = 0; i < n; ++i) mask[static_cast<size_t>(i)] = rng.uniform() < keep ? 1.0 / keep : 0.0;
  Tensor out = Tensor::zeros(x.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) o[static_cast<size_t>(i)] = x.data()[static_cast<size_t>(i)] * mask[static_cast<size_t>(i)];
  }
  Tape* tp = tape_of({&x});
  const int xn = x.on_tape() ? x.node : -1;
  detail::attach(out, tp, "dropout", [xn, mask, n](const std::vector<double>& g, Tape& t) {
    if (xn >= 0) {
      std::vector<double> gx(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) gx[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * mask[static_cast<size_t>(i)];
      t.accumulate(xn, gx);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Graph-specific primitives.
// ---------------------------------------------------------------------------

/// D^-1 A with the convention 1/0 := 0: rows with zero sum stay zero and
/// receive zero gradient.
inline Tensor row_normalize(const Tensor& A) {
  check_shape(A.ndim() == 2 && A.dim(0) == A.dim(1), "row_normalize: need a square matrix, got " + shape_str(A.shape()));
  const int n = A.dim(0);
  std::vector<double> degree(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) degree[static_cast<size_t>(i)] += A(i, j);
  }
  Tensor out = Tensor::zeros({n, n});
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) {
      if (degree[static_cast<size_t>(i)] != 0.0) {
        for (int j = 0; j < n; ++j) o[static_cast<size_t>(i) * n + j] = A(i, j) / degree[static_cast<size_t>(i)];
      }
    }
  }
  Tape* tp = tape_of({&A});
  const int An = A.on_tape() ? A.node : -1;
  const Tensor y = out.detach();
  detail::attach(out, tp, "row_normalize", [y, An, n, degree](const std::vector<double>& g, Tape& t) {
    if (An >= 0) {
      // y_ij = a_ij / d_i  =>  dL/da_ik = (g_ik - sum_j g_ij y_ij) / d_i
      std::vector<double> gA(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) {
        const double d = degree[static_cast<size_t>(i)];
        if (d == 0.0) continue;
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += g[static_cast<size_t>(i) * n + j] * y(i, j);
        for (int k = 0; k < n; ++k) gA[static_cast<size_t>(i) * n + k] = (g[static_cast<size_t>(i) * n + k] - dot) / d;
      }
      t.accumulate(An, gA);
    }
  });
  return out;
}

/// Elementwise binary cross entropy against constant targets, computed from
/// logits for numerical stability. Returns the elementwise loss tensor.
inline Tensor bce_with_logits(const Tensor& logits, const Tensor& targets) {
  check_shape(logits.shape() == targets.shape(), "bce_with_logits: shapes differ, " +
                                                     shape_str(logits.shape()) + " vs " +
                                                     shape_str(targets.shape()));
  const int n = logits.size();
  Tensor out = Tensor::zeros(logits.shape());
  {
    auto& o = out.mutable_data();
    for (int i = 0; i < n; ++i) {
      const double z = logits.data()[static_cast<size_t>(i)];
      const double p = targets.data()[static_cast<size_t>(i)];
      o[static_cast<size_t>(i)] = std::max(z, 0.0) - z * p + std::log1p(std::exp(-std::fabs(z)));
    }
  }
  Tape* tp = tape_of({&logits});
  const int zn = logits.on_tape() ? logits.node : -1;
  detail::attach(out, tp, "bce_with_logits", [logits, targets, zn, n](const std::vector<double>& g, Tape& t) {
    if (zn >= 0) {
      std::vector<double> gz(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        const double z = logits.data()[static_cast<size_t>(i)];
        const double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        gz[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * (s - targets.data()[static_cast<size_t>(i)]);
      }
      t.accumulate(zn, gz);
    }
  });
  return out;
}

}  // namespace lgf

#endif  // LGF_CORE_OPS_HPP_
