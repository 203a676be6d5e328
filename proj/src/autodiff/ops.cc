// autodiff/ops.cc

// Copyright 2026  The BargeBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bargebench/autodiff/ops.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "bargebench/common/error.h"

namespace bargebench::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;
using MapC = Eigen::Map<const RowMat>;
using Map = Eigen::Map<RowMat>;

MapC View(const std::vector<double> &v, int rows, int cols) {
  return MapC(v.data(), rows, cols);
}
Map View(std::vector<double> &v, int rows, int cols) {
  return Map(v.data(), rows, cols);
}

void RequireRank(const Tensor &t, size_t rank, const char *op,
                 const char *arg) {
  if (!t.defined())
    throw ShapeError(std::string(op) + ": " + arg + " is undefined");
  if (t.rank() != rank)
    throw ShapeError(std::string(op) + ": " + arg + " must have rank " +
                     std::to_string(rank) + ", got " + ShapeString(t.shape()));
}

void RequireSameShape(const Tensor &a, const Tensor &b, const char *op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shapes " + ShapeString(a.shape()) +
                     " and " + ShapeString(b.shape()) + " differ");
}

void RequireDim(int got, int want, const char *op, const char *what) {
  if (got != want)
    throw ShapeError(std::string(op) + ": " + what + " is " +
                     std::to_string(got) + ", expected " + std::to_string(want));
}

// Accumulates g into parent i's grad if that parent wants one.
template <typename F>
void IfGrad(Node &self, size_t i, F &&f) {
  Node &p = *self.parents[i];
  if (p.requires_grad) f(p.Grad(), p);
}

template <typename Fwd, typename Dydx>
Tensor Unary(const Tensor &a, Fwd fwd, Dydx dydx) {
  std::vector<double> y(a.size());
  std::transform(a.value().begin(), a.value().end(), y.begin(), fwd);
  return Tensor::FromOp(a.shape(), std::move(y), {a}, [dydx](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &p) {
      for (size_t i = 0; i < g.size(); ++i)
        g[i] += self.grad[i] * dydx(p.value[i], self.value[i]);
    });
  });
}

}  // namespace

Tensor MatMul(const Tensor &a, const Tensor &b) {
  RequireRank(a, 2, "MatMul", "a");
  RequireRank(b, 2, "MatMul", "b");
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  RequireDim(b.dim(0), k, "MatMul", "b rows");
  std::vector<double> y(static_cast<size_t>(m) * n);
  View(y, m, n).noalias() = View(a.value(), m, k) * View(b.value(), k, n);
  return Tensor::FromOp({m, n}, std::move(y), {a, b}, [m, k, n](Node &self) {
    MapC gy = View(std::as_const(self.grad), m, n);
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      View(g, m, k).noalias() += gy * View(self.parents[1]->value, k, n).transpose();
    });
    IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
      View(g, k, n).noalias() += View(self.parents[0]->value, m, k).transpose() * gy;
    });
  });
}

Tensor Transpose(const Tensor &a) {
  RequireRank(a, 2, "Transpose", "a");
  const int m = a.dim(0), n = a.dim(1);
  std::vector<double> y(a.size());
  View(y, n, m) = View(a.value(), m, n).transpose();
  return Tensor::FromOp({n, m}, std::move(y), {a}, [m, n](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      View(g, m, n) += View(self.grad, n, m).transpose();
    });
  });
}

Tensor Add(const Tensor &a, const Tensor &b) {
  RequireSameShape(a, b, "Add");
  std::vector<double> y(a.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = a.at(i) + b.at(i);
  return Tensor::FromOp(a.shape(), std::move(y), {a, b}, [](Node &self) {
    for (size_t j = 0; j < 2; ++j)
      IfGrad(self, j, [&](std::vector<double> &g, Node &) {
        for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
      });
  });
}

Tensor Sub(const Tensor &a, const Tensor &b) {
  RequireSameShape(a, b, "Sub");
  std::vector<double> y(a.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = a.at(i) - b.at(i);
  return Tensor::FromOp(a.shape(), std::move(y), {a, b}, [](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    });
    IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
      for (size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
    });
  });
}

Tensor Mul(const Tensor &a, const Tensor &b) {
  RequireSameShape(a, b, "Mul");
  std::vector<double> y(a.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = a.at(i) * b.at(i);
  return Tensor::FromOp(a.shape(), std::move(y), {a, b}, [](Node &self) {
    for (size_t j = 0; j < 2; ++j)
      IfGrad(self, j, [&](std::vector<double> &g, Node &) {
        const auto &other = self.parents[1 - j]->value;
        for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * other[i];
      });
  });
}

Tensor AddBias(const Tensor &a, const Tensor &bias) {
  RequireRank(a, 2, "AddBias", "a");
  RequireRank(bias, 1, "AddBias", "bias");
  const int m = a.dim(0), n = a.dim(1);
  RequireDim(bias.dim(0), n, "AddBias", "bias length");
  std::vector<double> y(a.value());
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) y[static_cast<size_t>(r) * n + c] += bias.at(c);
  return Tensor::FromOp(a.shape(), std::move(y), {a, bias}, [m, n](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    });
    IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) g[c] += self.grad[static_cast<size_t>(r) * n + c];
    });
  });
}

Tensor Scale(const Tensor &a, double s) {
  return Unary(a, [s](double x) { return s * x; },
               [s](double, double) { return s; });
}

Tensor Sigmoid(const Tensor &a) {
  return Unary(
      a,
      [](double x) {
        // Stable in both tails.
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor Relu(const Tensor &a) {
  return Unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor Tanh(const Tensor &a) {
  return Unary(a, [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Tensor Softmax(const Tensor &a, int axis, const Tensor &mask) {
  RequireRank(a, 2, "Softmax", "input");
  if (axis != 0 && axis != 1) throw ShapeError("Softmax: axis must be 0 or 1");
  if (mask.defined()) {
    if (mask.shape() != a.shape())
      throw ShapeError("Softmax: mask shape " + ShapeString(mask.shape()) +
                       " differs from input " + ShapeString(a.shape()));
  }
  const int rows = a.dim(0), cols = a.dim(1);
  // A slice is a row (axis 1) or a column (axis 0).
  const int slices = axis == 1 ? rows : cols;
  const int len = axis == 1 ? cols : rows;
  auto idx = [=](int s, int j) -> size_t {
    return axis == 1 ? static_cast<size_t>(s) * cols + j
                     : static_cast<size_t>(j) * cols + s;
  };
  std::vector<double> y(a.size(), 0.0);
  for (int s = 0; s < slices; ++s) {
    double mx = -INFINITY;
    for (int j = 0; j < len; ++j) {
      size_t i = idx(s, j);
      double m = mask.defined() ? mask.at(i) : 0.0;
      if (m <= kMaskThreshold) continue;
      mx = std::max(mx, a.at(i) + m);
    }
    if (mx == -INFINITY)
      throw NumericError("Softmax: slice " + std::to_string(s) +
                         " is fully masked");
    double sum = 0.0;
    for (int j = 0; j < len; ++j) {
      size_t i = idx(s, j);
      double m = mask.defined() ? mask.at(i) : 0.0;
      if (m <= kMaskThreshold) continue;
      y[i] = std::exp(a.at(i) + m - mx);
      sum += y[i];
    }
    for (int j = 0; j < len; ++j) y[idx(s, j)] /= sum;
  }
  return Tensor::FromOp(a.shape(), std::move(y), {a},
                        [slices, len, idx](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (int s = 0; s < slices; ++s) {
        double dot = 0.0;
        for (int j = 0; j < len; ++j) {
          size_t i = idx(s, j);
          dot += self.grad[i] * self.value[i];
        }
        for (int j = 0; j < len; ++j) {
          size_t i = idx(s, j);
          g[i] += self.value[i] * (self.grad[i] - dot);
        }
      }
    });
  });
}

Tensor Concat(const std::vector<Tensor> &parts, int axis) {
  if (parts.empty()) throw ShapeError("Concat: no inputs");
  if (axis != 0 && axis != 1) throw ShapeError("Concat: axis must be 0 or 1");
  for (const Tensor &p : parts) RequireRank(p, 2, "Concat", "input");
  const int other = 1 - axis;
  const int fixed = parts[0].dim(other);
  int total = 0;
  std::vector<int> offsets;
  for (const Tensor &p : parts) {
    RequireDim(p.dim(other), fixed, "Concat",
               axis == 0 ? "column count" : "row count");
    offsets.push_back(total);
    total += p.dim(axis);
  }
  const int rows = axis == 0 ? total : fixed;
  const int cols = axis == 0 ? fixed : total;
  std::vector<double> y(static_cast<size_t>(rows) * cols);
  for (size_t k = 0; k < parts.size(); ++k) {
    const Tensor &p = parts[k];
    if (axis == 0)
      View(y, rows, cols).middleRows(offsets[k], p.dim(0)) =
          View(p.value(), p.dim(0), cols);
    else
      View(y, rows, cols).middleCols(offsets[k], p.dim(1)) =
          View(p.value(), rows, p.dim(1));
  }
  return Tensor::FromOp({rows, cols}, std::move(y), parts,
                        [axis, rows, cols, offsets](Node &self) {
    for (size_t k = 0; k < self.parents.size(); ++k)
      IfGrad(self, k, [&](std::vector<double> &g, Node &p) {
        const int pr = p.shape[0], pc = p.shape[1];
        if (axis == 0)
          View(g, pr, pc) += View(self.grad, rows, cols).middleRows(offsets[k], pr);
        else
          View(g, pr, pc) += View(self.grad, rows, cols).middleCols(offsets[k], pc);
      });
  });
}

Tensor Slice(const Tensor &a, int axis, int start, int length) {
  RequireRank(a, 2, "Slice", "input");
  if (axis != 0 && axis != 1) throw ShapeError("Slice: axis must be 0 or 1");
  if (start < 0 || length < 0 || start + length > a.dim(axis))
    throw ShapeError("Slice: range [" + std::to_string(start) + ", " +
                     std::to_string(start + length) + ") outside axis of " +
                     std::to_string(a.dim(axis)));
  const int rows = a.dim(0), cols = a.dim(1);
  const int out_r = axis == 0 ? length : rows;
  const int out_c = axis == 0 ? cols : length;
  std::vector<double> y(static_cast<size_t>(out_r) * out_c);
  if (axis == 0)
    View(y, out_r, out_c) = View(a.value(), rows, cols).middleRows(start, length);
  else
    View(y, out_r, out_c) = View(a.value(), rows, cols).middleCols(start, length);
  return Tensor::FromOp({out_r, out_c}, std::move(y), {a},
                        [=](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      if (axis == 0)
        View(g, rows, cols).middleRows(start, length) += View(self.grad, out_r, out_c);
      else
        View(g, rows, cols).middleCols(start, length) += View(self.grad, out_r, out_c);
    });
  });
}

Tensor Reshape(const Tensor &a, Shape shape) {
  if (NumElements(shape) != a.size())
    throw ShapeError("Reshape: " + ShapeString(a.shape()) + " -> " +
                     ShapeString(shape) + " changes the element count");
  return Tensor::FromOp(std::move(shape), a.value(), {a}, [](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    });
  });
}

Tensor Gather(const Tensor &table, const std::vector<int> &ids) {
  RequireRank(table, 2, "Gather", "table");
  const int v = table.dim(0), e = table.dim(1);
  const int n = static_cast<int>(ids.size());
  std::vector<double> y(static_cast<size_t>(n) * e);
  for (int r = 0; r < n; ++r) {
    if (ids[r] < 0 || ids[r] >= v)
      throw ShapeError("Gather: id " + std::to_string(ids[r]) +
                       " outside table of " + std::to_string(v) + " rows");
    std::copy_n(table.value().begin() + static_cast<size_t>(ids[r]) * e, e,
                y.begin() + static_cast<size_t>(r) * e);
  }
  return Tensor::FromOp({n, e}, std::move(y), {table}, [ids, e](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (size_t r = 0; r < ids.size(); ++r)
        for (int c = 0; c < e; ++c)
          g[static_cast<size_t>(ids[r]) * e + c] += self.grad[r * e + c];
    });
  });
}

Tensor DepthwiseCausalConv1d(const Tensor &x, const Tensor &w) {
  RequireRank(x, 2, "DepthwiseCausalConv1d", "x");
  RequireRank(w, 2, "DepthwiseCausalConv1d", "w");
  const int t_len = x.dim(0), c = x.dim(1), k = w.dim(1);
  RequireDim(w.dim(0), c, "DepthwiseCausalConv1d", "w channels");
  if (k < 1) throw ShapeError("DepthwiseCausalConv1d: kernel width < 1");
  std::vector<double> y(x.size(), 0.0);
  for (int t = 0; t < t_len; ++t)
    for (int j = 0; j < k && j <= t; ++j)
      for (int ch = 0; ch < c; ++ch)
        y[static_cast<size_t>(t) * c + ch] +=
            w.at(static_cast<size_t>(ch) * k + j) *
            x.at(static_cast<size_t>(t - j) * c + ch);
  return Tensor::FromOp(x.shape(), std::move(y), {x, w},
                        [t_len, c, k](Node &self) {
    const auto &xv = self.parents[0]->value;
    const auto &wv = self.parents[1]->value;
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (int t = 0; t < t_len; ++t)
        for (int j = 0; j < k && j <= t; ++j)
          for (int ch = 0; ch < c; ++ch)
            g[static_cast<size_t>(t - j) * c + ch] +=
                wv[static_cast<size_t>(ch) * k + j] *
                self.grad[static_cast<size_t>(t) * c + ch];
    });
    IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
      for (int t = 0; t < t_len; ++t)
        for (int j = 0; j < k && j <= t; ++j)
          for (int ch = 0; ch < c; ++ch)
            g[static_cast<size_t>(ch) * k + j] +=
                xv[static_cast<size_t>(t - j) * c + ch] *
                self.grad[static_cast<size_t>(t) * c + ch];
    });
  });
}

Tensor CausalConv1d(const Tensor &x, const Tensor &w) {
  RequireRank(x, 2, "CausalConv1d", "x");
  RequireRank(w, 3, "CausalConv1d", "w");
  const int t_len = x.dim(0), cin = x.dim(1);
  const int cout = w.dim(0), k = w.dim(1);
  RequireDim(w.dim(2), cin, "CausalConv1d", "w input channels");
  if (k < 1) throw ShapeError("CausalConv1d: kernel width < 1");
  // y = sum_j shift_j(x) W_j^T with W_j = w[:, j, :].
  std::vector<double> y(static_cast<size_t>(t_len) * cout, 0.0);
  auto wj = [=](const std::vector<double> &wv, int j) {
    return Eigen::Map<const RowMat, 0, Eigen::OuterStride<>>(
        wv.data() + static_cast<size_t>(j) * cin, cout, cin,
        Eigen::OuterStride<>(k * cin));
  };
  for (int j = 0; j < k && j < t_len; ++j)
    View(y, t_len, cout).bottomRows(t_len - j).noalias() +=
        View(x.value(), t_len, cin).topRows(t_len - j) * wj(w.value(), j).transpose();
  return Tensor::FromOp({t_len, cout}, std::move(y), {x, w},
                        [t_len, cin, cout, k, wj](Node &self) {
    MapC gy = View(std::as_const(self.grad), t_len, cout);
    const auto &xv = self.parents[0]->value;
    const auto &wv = self.parents[1]->value;
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (int j = 0; j < k && j < t_len; ++j)
        View(g, t_len, cin).topRows(t_len - j).noalias() +=
            gy.bottomRows(t_len - j) * wj(wv, j);
    });
    IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
      for (int j = 0; j < k && j < t_len; ++j) {
        Eigen::Map<RowMat, 0, Eigen::OuterStride<>> gw(
            g.data() + static_cast<size_t>(j) * cin, cout, cin,
            Eigen::OuterStride<>(k * cin));
        gw.noalias() += gy.bottomRows(t_len - j).transpose() *
                        View(xv, t_len, cin).topRows(t_len - j);
      }
    });
  });
}

Tensor TransposedConv1d(const Tensor &x, const Tensor &w, int stride) {
  RequireRank(x, 2, "TransposedConv1d", "x");
  RequireRank(w, 3, "TransposedConv1d", "w");
  if (stride < 1) throw ShapeError("TransposedConv1d: stride < 1");
  const int t_len = x.dim(0), cin = x.dim(1);
  const int k = w.dim(0), cout = w.dim(2);
  RequireDim(w.dim(1), cin, "TransposedConv1d", "w input channels");
  if (t_len == 0) throw ShapeError("TransposedConv1d: empty input");
  const int out_len = (t_len - 1) * stride + k;
  std::vector<double> y(static_cast<size_t>(out_len) * cout, 0.0);
  // Row block for tap j: rows j, j + stride, ... of the output.
  auto rows_of = [=](std::vector<double> &v, int j) {
    return Eigen::Map<RowMat, 0, Eigen::OuterStride<>>(
        v.data() + static_cast<size_t>(j) * cout, t_len, cout,
        Eigen::OuterStride<>(stride * cout));
  };
  for (int j = 0; j < k; ++j)
    rows_of(y, j).noalias() +=
        View(x.value(), t_len, cin) *
        View(w.value(), k * cin, cout).middleRows(j * cin, cin);
  return Tensor::FromOp({out_len, cout}, std::move(y), {x, w},
                        [=](Node &self) {
    const auto &xv = self.parents[0]->value;
    const auto &wv = self.parents[1]->value;
    for (int j = 0; j < k; ++j) {
      auto gy = rows_of(self.grad, j);
      IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
        View(g, t_len, cin).noalias() +=
            gy * View(wv, k * cin, cout).middleRows(j * cin, cin).transpose();
      });
      IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
        View(g, k * cin, cout).middleRows(j * cin, cin).noalias() +=
            View(xv, t_len, cin).transpose() * gy;
      });
    }
  });
}

Tensor Conv2d(const Tensor &x, const Tensor &w, const Tensor &bias,
              const Conv2dGeometry &geo) {
  RequireRank(x, 3, "Conv2d", "x");
  RequireRank(w, 4, "Conv2d", "w");
  RequireRank(bias, 1, "Conv2d", "bias");
  const int h = x.dim(0), wd = x.dim(1), cin = x.dim(2);
  const int cout = w.dim(0), kh = w.dim(1), kw = w.dim(2);
  RequireDim(w.dim(3), cin, "Conv2d", "w input channels");
  RequireDim(bias.dim(0), cout, "Conv2d", "bias length");
  if (geo.stride_h < 1 || geo.stride_w < 1 || geo.pad_h < 0 || geo.pad_w < 0)
    throw ShapeError("Conv2d: bad stride or padding");
  const int oh = (h + 2 * geo.pad_h - kh) / geo.stride_h + 1;
  const int ow = (wd + 2 * geo.pad_w - kw) / geo.stride_w + 1;
  if (h + 2 * geo.pad_h < kh || wd + 2 * geo.pad_w < kw || oh < 1 || ow < 1)
    throw ShapeError("Conv2d: kernel larger than padded input " +
                     ShapeString(x.shape()));
  const int patch = kh * kw * cin;
  // im2col: one row per output position, (ky, kx, c) order matching w.
  auto im2col = [=](const std::vector<double> &xv) {
    std::vector<double> cols(static_cast<size_t>(oh) * ow * patch, 0.0);
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double *row = cols.data() + (static_cast<size_t>(oy) * ow + ox) * patch;
        for (int ky = 0; ky < kh; ++ky) {
          const int iy = oy * geo.stride_h - geo.pad_h + ky;
          if (iy < 0 || iy >= h) continue;
          for (int kx = 0; kx < kw; ++kx) {
            const int ix = ox * geo.stride_w - geo.pad_w + kx;
            if (ix < 0 || ix >= wd) continue;
            std::copy_n(xv.data() + (static_cast<size_t>(iy) * wd + ix) * cin,
                        cin, row + (ky * kw + kx) * cin);
          }
        }
      }
    return cols;
  };
  const int positions = oh * ow;
  std::vector<double> cols = im2col(x.value());
  std::vector<double> y(static_cast<size_t>(positions) * cout);
  View(y, positions, cout).noalias() =
      View(cols, positions, patch) * View(w.value(), cout, patch).transpose();
  for (int p = 0; p < positions; ++p)
    for (int o = 0; o < cout; ++o) y[static_cast<size_t>(p) * cout + o] += bias.at(o);
  return Tensor::FromOp({oh, ow, cout}, std::move(y), {x, w, bias},
                        [=, cols = std::move(cols)](Node &self) {
    MapC gy = View(std::as_const(self.grad), positions, cout);
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      RowMat gcols = gy * View(self.parents[1]->value, cout, patch);
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          const double *row = gcols.data() + (static_cast<size_t>(oy) * ow + ox) * patch;
          for (int ky = 0; ky < kh; ++ky) {
            const int iy = oy * geo.stride_h - geo.pad_h + ky;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < kw; ++kx) {
              const int ix = ox * geo.stride_w - geo.pad_w + kx;
              if (ix < 0 || ix >= wd) continue;
              double *dst = g.data() + (static_cast<size_t>(iy) * wd + ix) * cin;
              const double *src = row + (ky * kw + kx) * cin;
              for (int c = 0; c < cin; ++c) dst[c] += src[c];
            }
          }
        }
    });
    IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
      View(g, cout, patch).noalias() += gy.transpose() * View(cols, positions, patch);
    });
    IfGrad(self, 2, [&](std::vector<double> &g, Node &) {
      for (int p = 0; p < positions; ++p)
        for (int o = 0; o < cout; ++o) g[o] += self.grad[static_cast<size_t>(p) * cout + o];
    });
  });
}

Tensor GruCell(const Tensor &x, const Tensor &h, const Tensor &w_x,
               const Tensor &w_h, const Tensor &b_x, const Tensor &b_h) {
  RequireRank(x, 2, "GruCell", "x");
  RequireRank(h, 2, "GruCell", "h");
  RequireRank(w_x, 2, "GruCell", "w_x");
  RequireRank(w_h, 2, "GruCell", "w_h");
  RequireRank(b_x, 1, "GruCell", "b_x");
  RequireRank(b_h, 1, "GruCell", "b_h");
  const int b = x.dim(0), in = x.dim(1), hid = h.dim(1);
  RequireDim(h.dim(0), b, "GruCell", "h rows");
  RequireDim(w_x.dim(0), in, "GruCell", "w_x rows");
  RequireDim(w_x.dim(1), 3 * hid, "GruCell", "w_x columns");
  RequireDim(w_h.dim(0), hid, "GruCell", "w_h rows");
  RequireDim(w_h.dim(1), 3 * hid, "GruCell", "w_h columns");
  RequireDim(b_x.dim(0), 3 * hid, "GruCell", "b_x length");
  RequireDim(b_h.dim(0), 3 * hid, "GruCell", "b_h length");
  const int g3 = 3 * hid;
  RowMat gx = View(x.value(), b, in) * View(w_x.value(), in, g3);
  RowMat gh = View(h.value(), b, hid) * View(w_h.value(), hid, g3);
  for (int r = 0; r < b; ++r)
    for (int j = 0; j < g3; ++j) {
      gx(r, j) += b_x.at(j);
      gh(r, j) += b_h.at(j);
    }
  auto sig = [](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    double e = std::exp(v);
    return e / (1.0 + e);
  };
  // Saved activations: z, r, n, and h Un + cn.
  std::vector<double> z(static_cast<size_t>(b) * hid), rg(z.size()), n(z.size()),
      ghn(z.size()), y(z.size());
  for (int r = 0; r < b; ++r)
    for (int j = 0; j < hid; ++j) {
      const size_t i = static_cast<size_t>(r) * hid + j;
      z[i] = sig(gx(r, j) + gh(r, j));
      rg[i] = sig(gx(r, hid + j) + gh(r, hid + j));
      ghn[i] = gh(r, 2 * hid + j);
      n[i] = std::tanh(gx(r, 2 * hid + j) + rg[i] * ghn[i]);
      y[i] = (1.0 - z[i]) * n[i] + z[i] * h.at(i);
    }
  return Tensor::FromOp(
      {b, hid}, std::move(y), {x, h, w_x, w_h, b_x, b_h},
      [=, z = std::move(z), rg = std::move(rg), n = std::move(n),
       ghn = std::move(ghn)](Node &self) {
        const auto &hv = self.parents[1]->value;
        RowMat dgx(b, g3), dgh(b, g3);
        std::vector<double> dh_direct(static_cast<size_t>(b) * hid);
        for (int r = 0; r < b; ++r)
          for (int j = 0; j < hid; ++j) {
            const size_t i = static_cast<size_t>(r) * hid + j;
            const double dy = self.grad[i];
            const double dz = dy * (hv[i] - n[i]);
            const double dn = dy * (1.0 - z[i]);
            dh_direct[i] = dy * z[i];
            const double dan = dn * (1.0 - n[i] * n[i]);
            const double dr = dan * ghn[i];
            const double daz = dz * z[i] * (1.0 - z[i]);
            const double dar = dr * rg[i] * (1.0 - rg[i]);
            dgx(r, j) = daz;
            dgx(r, hid + j) = dar;
            dgx(r, 2 * hid + j) = dan;
            dgh(r, j) = daz;
            dgh(r, hid + j) = dar;
            dgh(r, 2 * hid + j) = dan * rg[i];
          }
        IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
          View(g, b, in).noalias() +=
              dgx * View(self.parents[2]->value, in, g3).transpose();
        });
        IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
          Map gh_in = View(g, b, hid);
          gh_in.noalias() += dgh * View(self.parents[3]->value, hid, g3).transpose();
          for (size_t i = 0; i < g.size(); ++i) g[i] += dh_direct[i];
        });
        IfGrad(self, 2, [&](std::vector<double> &g, Node &) {
          View(g, in, g3).noalias() +=
              View(self.parents[0]->value, b, in).transpose() * dgx;
        });
        IfGrad(self, 3, [&](std::vector<double> &g, Node &) {
          View(g, hid, g3).noalias() += View(hv, b, hid).transpose() * dgh;
        });
        IfGrad(self, 4, [&](std::vector<double> &g, Node &) {
          for (int r = 0; r < b; ++r)
            for (int j = 0; j < g3; ++j) g[j] += dgx(r, j);
        });
        IfGrad(self, 5, [&](std::vector<double> &g, Node &) {
          for (int r = 0; r < b; ++r)
            for (int j = 0; j < g3; ++j) g[j] += dgh(r, j);
        });
      });
}

Tensor GruSequence(const Tensor &x, const Tensor &h0, const Tensor &w_x,
                   const Tensor &w_h, const Tensor &b_x, const Tensor &b_h) {
  RequireRank(x, 2, "GruSequence", "x");
  RequireRank(h0, 2, "GruSequence", "h0");
  RequireRank(w_x, 2, "GruSequence", "w_x");
  RequireRank(w_h, 2, "GruSequence", "w_h");
  RequireRank(b_x, 1, "GruSequence", "b_x");
  RequireRank(b_h, 1, "GruSequence", "b_h");
  const int t_len = x.dim(0), in = x.dim(1), hid = h0.dim(1);
  RequireDim(h0.dim(0), 1, "GruSequence", "h0 rows");
  RequireDim(w_x.dim(0), in, "GruSequence", "w_x rows");
  RequireDim(w_x.dim(1), 3 * hid, "GruSequence", "w_x columns");
  RequireDim(w_h.dim(0), hid, "GruSequence", "w_h rows");
  RequireDim(w_h.dim(1), 3 * hid, "GruSequence", "w_h columns");
  RequireDim(b_x.dim(0), 3 * hid, "GruSequence", "b_x length");
  RequireDim(b_h.dim(0), 3 * hid, "GruSequence", "b_h length");
  if (t_len == 0) throw ShapeError("GruSequence: empty sequence");
  const int g3 = 3 * hid;
  auto sig = [](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    double e = std::exp(v);
    return e / (1.0 + e);
  };
  RowMat gx = View(x.value(), t_len, in) * View(w_x.value(), in, g3);
  const size_t n_el = static_cast<size_t>(t_len) * hid;
  std::vector<double> z(n_el), rg(n_el), n(n_el), ghn(n_el), y(n_el);
  MapC wh = View(w_h.value(), hid, g3);
  Eigen::RowVectorXd gh(g3);
  const double *hp = h0.value().data();
  for (int t = 0; t < t_len; ++t) {
    gh.noalias() = Eigen::Map<const Eigen::RowVectorXd>(hp, hid) * wh;
    for (int j = 0; j < hid; ++j) {
      const size_t i = static_cast<size_t>(t) * hid + j;
      const double hz = gh(j) + b_h.at(j), hr = gh(hid + j) + b_h.at(hid + j);
      z[i] = sig(gx(t, j) + b_x.at(j) + hz);
      rg[i] = sig(gx(t, hid + j) + b_x.at(hid + j) + hr);
      ghn[i] = gh(2 * hid + j) + b_h.at(2 * hid + j);
      n[i] = std::tanh(gx(t, 2 * hid + j) + b_x.at(2 * hid + j) + rg[i] * ghn[i]);
      y[i] = (1.0 - z[i]) * n[i] + z[i] * hp[j];
    }
    hp = y.data() + static_cast<size_t>(t) * hid;
  }
  return Tensor::FromOp(
      {t_len, hid}, std::move(y), {x, h0, w_x, w_h, b_x, b_h},
      [=, z = std::move(z), rg = std::move(rg), n = std::move(n),
       ghn = std::move(ghn)](Node &self) {
        const auto &h0v = self.parents[1]->value;
        MapC whv = View(std::as_const(self.parents[3]->value), hid, g3);
        // Row t of hprev is the state entering step t.
        RowMat hprev(t_len, hid);
        hprev.row(0) = Eigen::Map<const Eigen::RowVectorXd>(h0v.data(), hid);
        if (t_len > 1)
          hprev.bottomRows(t_len - 1) = View(self.value, t_len, hid).topRows(t_len - 1);
        RowMat dgx(t_len, g3), dgh(t_len, g3);
        Eigen::RowVectorXd dh_next = Eigen::RowVectorXd::Zero(hid);
        for (int t = t_len - 1; t >= 0; --t) {
          Eigen::RowVectorXd dh_direct(hid);
          for (int j = 0; j < hid; ++j) {
            const size_t i = static_cast<size_t>(t) * hid + j;
            const double dy = self.grad[i] + dh_next(j);
            const double dz = dy * (hprev(t, j) - n[i]);
            const double dn = dy * (1.0 - z[i]);
            dh_direct(j) = dy * z[i];
            const double dan = dn * (1.0 - n[i] * n[i]);
            const double dr = dan * ghn[i];
            const double daz = dz * z[i] * (1.0 - z[i]);
            const double dar = dr * rg[i] * (1.0 - rg[i]);
            dgx(t, j) = daz;
            dgx(t, hid + j) = dar;
            dgx(t, 2 * hid + j) = dan;
            dgh(t, j) = daz;
            dgh(t, hid + j) = dar;
            dgh(t, 2 * hid + j) = dan * rg[i];
          }
          dh_next.noalias() = dh_direct + dgh.row(t) * whv.transpose();
        }
        IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
          View(g, t_len, in).noalias() +=
              dgx * View(self.parents[2]->value, in, g3).transpose();
        });
        IfGrad(self, 1, [&](std::vector<double> &g, Node &) {
          for (int j = 0; j < hid; ++j) g[j] += dh_next(j);
        });
        IfGrad(self, 2, [&](std::vector<double> &g, Node &) {
          View(g, in, g3).noalias() +=
              View(self.parents[0]->value, t_len, in).transpose() * dgx;
        });
        IfGrad(self, 3, [&](std::vector<double> &g, Node &) {
          View(g, hid, g3).noalias() += hprev.transpose() * dgh;
        });
        IfGrad(self, 4, [&](std::vector<double> &g, Node &) {
          Eigen::Map<Eigen::RowVectorXd>(g.data(), g3) += dgx.colwise().sum();
        });
        IfGrad(self, 5, [&](std::vector<double> &g, Node &) {
          Eigen::Map<Eigen::RowVectorXd>(g.data(), g3) += dgh.colwise().sum();
        });
      });
}

Tensor BceLoss(const Tensor &p, const std::vector<double> &labels) {
  if (labels.size() != p.size())
    throw ShapeError("BceLoss: " + std::to_string(p.size()) +
                     " probabilities vs " + std::to_string(labels.size()) +
                     " labels");
  if (p.size() == 0) throw ShapeError("BceLoss: empty input");
  const double inv_n = 1.0 / static_cast<double>(p.size());
  double loss = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p.at(i), kProbClip, 1.0 - kProbClip);
    loss -= labels[i] * std::log(q) + (1.0 - labels[i]) * std::log(1.0 - q);
  }
  return Tensor::FromOp({1}, {loss * inv_n}, {p}, [labels, inv_n](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &pn) {
      for (size_t i = 0; i < g.size(); ++i) {
        const double v = pn.value[i];
        if (v < kProbClip || v > 1.0 - kProbClip) continue;
        g[i] += self.grad[0] * inv_n *
                (-labels[i] / v + (1.0 - labels[i]) / (1.0 - v));
      }
    });
  });
}

Tensor Sum(const Tensor &a) {
  double s = 0.0;
  for (double v : a.value()) s += v;
  return Tensor::FromOp({1}, {s}, {a}, [](Node &self) {
    IfGrad(self, 0, [&](std::vector<double> &g, Node &) {
      for (double &v : g) v += self.grad[0];
    });
  });
}

Tensor Mean(const Tensor &a) {
  if (a.size() == 0) throw ShapeError("Mean: empty input");
  return Scale(Sum(a), 1.0 / static_cast<double>(a.size()));
}

}  // namespace bargebench::ad
