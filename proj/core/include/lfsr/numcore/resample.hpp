#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

// Positive rational resampling factor num/den.
struct Scale {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // round(extent * num / den), halves rounded up.
  std::int64_t apply(std::int64_t extent) const { return (2 * extent * num + den) / (2 * den); }
};

// Keys cubic-convolution kernel; a = -0.5 gives the third-order accurate
// variant used throughout this library.
double keys_weight(double x, double a = -0.5);

// Four-tap cubic interpolation stencil at continuous coordinate `coord`
// (pixel centers at integers), indices clamped into [0, extent).
struct CubicTap {
  std::array<std::int64_t, 4> index{};
  std::array<double, 4> weight{};
};
CubicTap cubic_tap(double coord, std::int64_t extent);

// Stencils for resizing `in_extent` samples by `scale` with half-pixel
// centers: src = (dst + 0.5) / scale - 0.5.
std::vector<CubicTap> resize_taps(std::int64_t in_extent, std::int64_t out_extent, Scale scale);

// Separable bicubic resize of [C,H,W] to [C, round(s*H), round(s*W)],
// edge-replicated borders, no anti-alias prefilter.
template <typename T>
Tensor<T> bicubic_resize(const Tensor<T>& image, Scale scale);

}  // namespace lfsr
