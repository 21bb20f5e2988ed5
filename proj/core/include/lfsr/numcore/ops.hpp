#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lfsr/numcore/record.hpp"
#include "lfsr/numcore/tensor.hpp"

// Differentiable primitives. Every function below records itself on the
// active DiffRecord of its scalar type when one of its inputs needs a
// gradient, and is a plain computation otherwise.
namespace lfsr {

template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> scale(const Tensor<T>& a, T factor);

// x has shape [C, ...], s has shape [1, ...]; s is broadcast over channels.
template <typename T> Tensor<T> mul_broadcast(const Tensor<T>& x, const Tensor<T>& s);

template <typename T> Tensor<T> relu(const Tensor<T>& x);
// Gradient passes where lo <= x <= hi.
template <typename T> Tensor<T> clamp(const Tensor<T>& x, T lo, T hi);

template <typename T> Tensor<T> sum(const Tensor<T>& x);
template <typename T> Tensor<T> mean(const Tensor<T>& x);
template <typename T> Tensor<T> dot(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mean_abs(const Tensor<T>& x);
// Mean absolute error.
template <typename T> Tensor<T> l1_loss(const Tensor<T>& pred, const Tensor<T>& target);

// out[.., i, ..] = x[.., i + 1, ..] - x[.., i, ..] along `axis`.
template <typename T> Tensor<T> forward_difference(const Tensor<T>& x, std::size_t axis);

template <typename T> Tensor<T> reshape(const Tensor<T>& x, Shape shape);
// Concatenation along axis 0; trailing extents must agree.
template <typename T> Tensor<T> concat(const std::vector<Tensor<T>>& parts);

// [C,H,W] -> [C,f*H,f*W], each input pixel replicated into an f x f block.
template <typename T> Tensor<T> upsample_nearest(const Tensor<T>& x, int factor);

// [N,D] -> [M,D] with out[m] = x[index[m]]. Indices are constants.
template <typename T>
Tensor<T> gather_rows(const Tensor<T>& x, std::span<const std::int64_t> index);
// Each row divided by max(|row|, eps).
template <typename T> Tensor<T> normalize_rows(const Tensor<T>& x, T eps = T(1e-12));
// [N,D] x [N,D] -> [N], row-wise inner products.
template <typename T> Tensor<T> row_dot(const Tensor<T>& a, const Tensor<T>& b);

// [C*r*r,H,W] -> [C,r*H,r*W], out(c, r*y+dy, r*x+dx) = in(c*r*r + dy*r + dx, y, x).
template <typename T> Tensor<T> pixel_shuffle(const Tensor<T>& x, int r);

}  // namespace lfsr
