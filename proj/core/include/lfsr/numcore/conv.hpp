#pragma once

#include <array>
#include <span>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

// Cross-correlation with zero padding over the trailing 1 to 4 axes of
// `input` ([C_in, S_1..S_d]); `kernel` is [C_out, C_in, k_1..k_d] and `bias`
// is [C_out]. Output extent per axis is (S + 2*pad - k) / stride + 1.
template <typename T>
Tensor<T> convnd(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                 std::span<const int> stride, std::span<const int> pad);

// [C_in,H,W] -> [C_out,H',W'], odd square kernel.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                 int stride, int pad);

// [C_in,D,H,W] -> [C_out,D',H',W'].
template <typename T>
Tensor<T> conv3d(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                 int stride, std::array<int, 3> pad);

}  // namespace lfsr
