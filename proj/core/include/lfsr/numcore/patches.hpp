#pragma once

#include <cstdint>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

struct PatchGeometry {
  int kernel = 3;
  int stride = 1;
  int pad = 1;

  // Sliding-window positions along an axis of `extent` samples.
  std::int64_t positions(std::int64_t extent) const { return (extent + 2 * pad - kernel) / stride + 1; }
};

// [C,H,W] -> [N, C*k*k]; rows enumerate window positions row-major, columns
// are (channel, dy, dx) row-major. Out-of-image taps read zero.
template <typename T>
Tensor<T> unfold_patches(const Tensor<T>& feature, PatchGeometry geom);

// Inverse of unfold_patches: sums patch contributions into [C,H,W] and
// divides every pixel by the number of in-image taps that cover it.
template <typename T>
Tensor<T> fold_patches(const Tensor<T>& patches, PatchGeometry geom, std::int64_t height,
                       std::int64_t width);

}  // namespace lfsr
