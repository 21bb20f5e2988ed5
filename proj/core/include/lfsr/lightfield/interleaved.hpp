#pragma once

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

// Shape-preserving convolutions over a light-field feature volume
// [Ch,U,V,H,W] with an odd square kernel [Ch_out,Ch,k,k] (padding k/2).
//
// spatial_conv convolves every view's (H,W) plane independently; angular_conv
// convolves every pixel's (U,V) plane independently.
template <typename T>
Tensor<T> spatial_conv(const Tensor<T>& features, const Tensor<T>& kernel, const Tensor<T>& bias);

template <typename T>
Tensor<T> angular_conv(const Tensor<T>& features, const Tensor<T>& kernel, const Tensor<T>& bias);

}  // namespace lfsr
