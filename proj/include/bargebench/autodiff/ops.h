// autodiff/ops.h

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

// Differentiable ops.  Matrices are rank-2 [rows, cols]; conv2d feature maps
// are rank-3 [height, width, channels].  Shape errors name the dimensions.

#ifndef BARGEBENCH_AUTODIFF_OPS_H_
#define BARGEBENCH_AUTODIFF_OPS_H_

#include <vector>

#include "bargebench/autodiff/tensor.h"

namespace bargebench::ad {

/// Additive mask value for excluded softmax positions.  Any mask entry at or
/// below kMaskThreshold gets exactly zero weight.
inline constexpr double kMaskedLogit = -1e30;
inline constexpr double kMaskThreshold = -1e29;

/// [m, k] x [k, n] -> [m, n].
Tensor MatMul(const Tensor &a, const Tensor &b);
/// Transpose of a matrix.
Tensor Transpose(const Tensor &a);

/// Elementwise, equal shapes.
Tensor Add(const Tensor &a, const Tensor &b);
Tensor Sub(const Tensor &a, const Tensor &b);
Tensor Mul(const Tensor &a, const Tensor &b);
/// [m, n] + bias[n] broadcast over rows.
Tensor AddBias(const Tensor &a, const Tensor &bias);
Tensor Scale(const Tensor &a, double s);

Tensor Sigmoid(const Tensor &a);
Tensor Relu(const Tensor &a);
Tensor Tanh(const Tensor &a);

/// Softmax of a matrix along `axis` (0 or 1).  `mask`, if defined, has
/// the input's shape and is added to the logits; it receives no gradient.
/// Masked positions come out exactly 0 and the rest renormalise.  A slice
/// with every position masked is a NumericError.
Tensor Softmax(const Tensor &a, int axis, const Tensor &mask = Tensor());

/// Concatenation of matrices along axis 0 (rows) or 1 (columns).
Tensor Concat(const std::vector<Tensor> &parts, int axis);
/// Matrix sub-range [start, start + length) along axis 0 or 1.
Tensor Slice(const Tensor &a, int axis, int start, int length);
/// Same values, new shape with the same element count.
Tensor Reshape(const Tensor &a, Shape shape);
/// Rows of table[V, E] picked by ids -> [ids.size(), E].
Tensor Gather(const Tensor &table, const std::vector<int> &ids);

/// Depthwise causal convolution over time: x[T, C], w[C, K],
/// y[t, c] = sum_k w[c, k] x[t - k, c], zero history.
Tensor DepthwiseCausalConv1d(const Tensor &x, const Tensor &w);
/// Full causal convolution: x[T, Cin], w[Cout, K, Cin],
/// y[t, o] = sum_{k, i} w[o, k, i] x[t - k, i].
Tensor CausalConv1d(const Tensor &x, const Tensor &w);
/// Transposed convolution: x[T, Cin], w[K, Cin, Cout] ->
/// [(T - 1) stride + K, Cout], y[t stride + k] += x[t] w[k].
Tensor TransposedConv1d(const Tensor &x, const Tensor &w, int stride);

struct Conv2dGeometry {
  int stride_h = 1, stride_w = 1;
  int pad_h = 0, pad_w = 0;
};
/// x[H, W, Cin], w[Cout, KH, KW, Cin], bias[Cout] -> [H', W', Cout] with zero
/// padding, H' = (H + 2 pad_h - KH) / stride_h + 1.
Tensor Conv2d(const Tensor &x, const Tensor &w, const Tensor &bias,
              const Conv2dGeometry &g);

/// One GRU step for a batch of rows: x[B, I], h[B, H], w_x[I, 3H],
/// w_h[H, 3H], b_x[3H], b_h[3H].  Gate blocks are ordered update (z),
/// reset (r), candidate (n):
///   z = sig(x Wz + bz + h Uz + cz), r = sig(x Wr + br + h Ur + cr),
///   n = tanh(x Wn + bn + r * (h Un + cn)), h' = (1 - z) * n + z * h.
Tensor GruCell(const Tensor &x, const Tensor &h, const Tensor &w_x,
               const Tensor &w_h, const Tensor &b_x, const Tensor &b_h);

/// GruCell applied along the rows of x[T, I] from h0[1, H]; returns all
/// hidden states [T, H].  Input projections are batched over time and the
/// whole recurrence is one graph node.
Tensor GruSequence(const Tensor &x, const Tensor &h0, const Tensor &w_x,
                   const Tensor &w_h, const Tensor &b_x, const Tensor &b_h);

/// Probability clip applied inside BceLoss.
inline constexpr double kProbClip = 1e-7;
/// Mean binary cross-entropy of probabilities p against 0/1 labels, with p
/// clipped to [1e-7, 1 - 1e-7]; clipped entries pass no gradient.
Tensor BceLoss(const Tensor &p, const std::vector<double> &labels);

/// Sum / mean of all elements -> [1].
Tensor Sum(const Tensor &a);
Tensor Mean(const Tensor &a);

}  // namespace bargebench::ad

#endif  // BARGEBENCH_AUTODIFF_OPS_H_
