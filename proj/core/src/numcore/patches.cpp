#include "lfsr/numcore/patches.hpp"

#include <vector>

#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/record.hpp"

namespace lfsr {
namespace {

// Calls fn(row, col, pixel) for every in-image tap; pixel indexes one
// channel plane.
template <typename Fn>
void for_each_tap(PatchGeometry g, std::int64_t h, std::int64_t w, Fn&& fn) {
  const std::int64_t ph = g.positions(h), pw = g.positions(w);
  const std::int64_t k = g.kernel;
  for (std::int64_t py = 0; py < ph; ++py) {
    for (std::int64_t px = 0; px < pw; ++px) {
      const std::int64_t row = py * pw + px;
      for (std::int64_t dy = 0; dy < k; ++dy) {
        const std::int64_t y = py * g.stride - g.pad + dy;
        if (y < 0 || y >= h) continue;
        for (std::int64_t dx = 0; dx < k; ++dx) {
          const std::int64_t x = px * g.stride - g.pad + dx;
          if (x < 0 || x >= w) continue;
          fn(row, dy * k + dx, y * w + x);
        }
      }
    }
  }
}

void check_geometry(PatchGeometry g, std::int64_t h, std::int64_t w) {
  if (g.kernel < 1 || g.stride < 1 || g.pad < 0) throw ArgumentError("patch geometry must have k>=1, stride>=1, pad>=0");
  if (h + 2 * g.pad < g.kernel || w + 2 * g.pad < g.kernel) {
    throw DimensionError("patch kernel larger than padded feature");
  }
}

}  // namespace

template <typename T>
Tensor<T> unfold_patches(const Tensor<T>& feature, PatchGeometry geom) {
  if (feature.rank() != 3) throw DimensionError("unfold_patches: expected [C,H,W]");
  const std::int64_t c = feature.dim(0), h = feature.dim(1), w = feature.dim(2);
  check_geometry(geom, h, w);
  const std::int64_t n = geom.positions(h) * geom.positions(w);
  const std::int64_t kk = static_cast<std::int64_t>(geom.kernel) * geom.kernel;
  const std::int64_t d = c * kk;
  Tensor<T> out(Shape{n, d});
  auto o = out.data_mut();
  auto f = feature.data();
  const std::int64_t plane = h * w;
  for_each_tap(geom, h, w, [&](std::int64_t row, std::int64_t tap, std::int64_t pix) {
    T* dst = o.data() + row * d + tap;
    for (std::int64_t ch = 0; ch < c; ++ch) dst[ch * kk] = f[ch * plane + pix];
  });
  auto fi = feature.impl();
  detail::record_op(out, {&feature}, [fi, geom, c, h, w, d, kk](std::span<const T> g) {
    auto s = detail::grad_sink(*fi);
    if (s.empty()) return;
    const std::int64_t plane = h * w;
    for_each_tap(geom, h, w, [&](std::int64_t row, std::int64_t tap, std::int64_t pix) {
      const T* src = g.data() + row * d + tap;
      for (std::int64_t ch = 0; ch < c; ++ch) s[ch * plane + pix] += src[ch * kk];
    });
  });
  return out;
}

template <typename T>
Tensor<T> fold_patches(const Tensor<T>& patches, PatchGeometry geom, std::int64_t height,
                       std::int64_t width) {
  if (patches.rank() != 2) throw DimensionError("fold_patches: expected [N, C*k*k]");
  check_geometry(geom, height, width);
  const std::int64_t n = geom.positions(height) * geom.positions(width);
  const std::int64_t kk = static_cast<std::int64_t>(geom.kernel) * geom.kernel;
  if (patches.dim(0) != n) {
    throw DimensionError("fold_patches: got " + std::to_string(patches.dim(0)) + " patches, geometry has " +
                         std::to_string(n) + " positions");
  }
  if (patches.dim(1) % kk != 0) throw DimensionError("fold_patches: row length not a multiple of k*k");
  const std::int64_t c = patches.dim(1) / kk;
  const std::int64_t d = patches.dim(1);
  const std::int64_t plane = height * width;

  std::vector<std::int64_t> count(static_cast<std::size_t>(plane), 0);
  for_each_tap(geom, height, width, [&](std::int64_t, std::int64_t, std::int64_t pix) { ++count[pix]; });
  std::vector<double> inv_count(count.size());
  for (std::size_t i = 0; i < count.size(); ++i) inv_count[i] = count[i] > 0 ? 1.0 / static_cast<double>(count[i]) : 0.0;

  // Extended precision keeps k identical copies summed exactly, so the
  // average of identical contributions reproduces the value bit-for-bit.
  std::vector<long double> acc(static_cast<std::size_t>(c * plane), 0.0L);
  auto p = patches.data();
  for_each_tap(geom, height, width, [&](std::int64_t row, std::int64_t tap, std::int64_t pix) {
    const T* src = p.data() + row * d + tap;
    for (std::int64_t ch = 0; ch < c; ++ch) acc[ch * plane + pix] += static_cast<long double>(src[ch * kk]);
  });
  Tensor<T> out(Shape{c, height, width});
  auto o = out.data_mut();
  for (std::int64_t ch = 0; ch < c; ++ch)
    for (std::int64_t i = 0; i < plane; ++i) o[ch * plane + i] = count[i] > 0 ? static_cast<T>(acc[ch * plane + i] / static_cast<long double>(count[i])) : T(0);

  auto pi = patches.impl();
  detail::record_op(out, {&patches}, [pi, geom, c, height, width, d, kk, inv_count = std::move(inv_count)](
                                         std::span<const T> g) {
    auto s = detail::grad_sink(*pi);
    if (s.empty()) return;
    const std::int64_t plane = height * width;
    for_each_tap(geom, height, width, [&](std::int64_t row, std::int64_t tap, std::int64_t pix) {
      T* dst = s.data() + row * d + tap;
      const T scale = static_cast<T>(inv_count[pix]);
      for (std::int64_t ch = 0; ch < c; ++ch) dst[ch * kk] += g[ch * plane + pix] * scale;
    });
  });
  return out;
}

template Tensor<float> unfold_patches(const Tensor<float>&, PatchGeometry);
template Tensor<double> unfold_patches(const Tensor<double>&, PatchGeometry);
template Tensor<float> fold_patches(const Tensor<float>&, PatchGeometry, std::int64_t, std::int64_t);
template Tensor<double> fold_patches(const Tensor<double>&, PatchGeometry, std::int64_t, std::int64_t);

}  // namespace lfsr
