#include "lfsr/numcore/resample.hpp"

#include <cmath>

#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/record.hpp"

namespace lfsr {

double keys_weight(double x, double a) {
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

CubicTap cubic_tap(double coord, std::int64_t extent) {
  CubicTap tap;
  const double base = std::floor(coord);
  const double t = coord - base;
  const auto i0 = static_cast<std::int64_t>(base);
  for (int j = 0; j < 4; ++j) {
    tap.index[j] = std::clamp<std::int64_t>(i0 - 1 + j, 0, extent - 1);
    tap.weight[j] = keys_weight(t - (j - 1));
  }
  return tap;
}

std::vector<CubicTap> resize_taps(std::int64_t in_extent, std::int64_t out_extent, Scale scale) {
  std::vector<CubicTap> taps(static_cast<std::size_t>(out_extent));
  const double inv = static_cast<double>(scale.den) / static_cast<double>(scale.num);
  for (std::int64_t o = 0; o < out_extent; ++o) {
    taps[o] = cubic_tap((static_cast<double>(o) + 0.5) * inv - 0.5, in_extent);
  }
  return taps;
}

namespace {

// Resamples the middle axis of an [outer, extent, inner] view.
template <typename T>
Tensor<T> resample_axis(const Tensor<T>& x, std::size_t axis, std::vector<CubicTap> taps) {
  const std::int64_t extent = x.dim(axis);
  std::int64_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= x.dim(a);
  for (std::size_t a = axis + 1; a < x.rank(); ++a) inner *= x.dim(a);
  const auto out_extent = static_cast<std::int64_t>(taps.size());
  Shape shape = x.shape();
  shape[axis] = out_extent;
  Tensor<T> out(shape);
  auto o = out.data_mut();
  auto xd = x.data();
  std::vector<double> acc(static_cast<std::size_t>(inner));
  for (std::int64_t p = 0; p < outer; ++p) {
    const T* src = xd.data() + p * extent * inner;
    for (std::int64_t i = 0; i < out_extent; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const CubicTap& tap = taps[i];
      for (int j = 0; j < 4; ++j) {
        const T* row = src + tap.index[j] * inner;
        const double wj = tap.weight[j];
        for (std::int64_t k = 0; k < inner; ++k) acc[k] += wj * static_cast<double>(row[k]);
      }
      T* dst = o.data() + (p * out_extent + i) * inner;
      for (std::int64_t k = 0; k < inner; ++k) dst[k] = static_cast<T>(acc[k]);
    }
  }
  auto xi = x.impl();
  detail::record_op(out, {&x}, [xi, taps = std::move(taps), outer, extent, inner](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    if (s.empty()) return;
    const auto out_extent = static_cast<std::int64_t>(taps.size());
    for (std::int64_t p = 0; p < outer; ++p) {
      T* dst = s.data() + p * extent * inner;
      for (std::int64_t i = 0; i < out_extent; ++i) {
        const T* gi = g.data() + (p * out_extent + i) * inner;
        const CubicTap& tap = taps[i];
        for (int j = 0; j < 4; ++j) {
          T* row = dst + tap.index[j] * inner;
          const T wj = static_cast<T>(tap.weight[j]);
          for (std::int64_t k = 0; k < inner; ++k) row[k] += wj * gi[k];
        }
      }
    }
  });
  return out;
}

}  // namespace

template <typename T>
Tensor<T> bicubic_resize(const Tensor<T>& image, Scale scale) {
  if (scale.num <= 0 || scale.den <= 0) {
    throw ArgumentError("bicubic_resize: scale must be positive, got " + std::to_string(scale.num) +
                        "/" + std::to_string(scale.den));
  }
  if (image.rank() != 3) throw DimensionError("bicubic_resize: expected [C,H,W], got " + shape_string(image.shape()));
  const std::int64_t h = image.dim(1), w = image.dim(2);
  const std::int64_t oh = scale.apply(h), ow = scale.apply(w);
  if (oh < 1 || ow < 1) throw ArgumentError("bicubic_resize: output extent would be empty");
  auto horizontal = resample_axis(image, 2, resize_taps(w, ow, scale));
  return resample_axis(horizontal, 1, resize_taps(h, oh, scale));
}

template Tensor<float> bicubic_resize(const Tensor<float>&, Scale);
template Tensor<double> bicubic_resize(const Tensor<double>&, Scale);

}  // namespace lfsr
