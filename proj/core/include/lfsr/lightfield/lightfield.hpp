#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

// Angular (u, v), spatial (h, w) and channel extents of a light field.
struct LfExtent {
  int u = 0;
  int v = 0;
  int h = 0;
  int w = 0;
  int c = 3;

  std::int64_t count() const { return std::int64_t{u} * v * h * w * c; }
  bool operator==(const LfExtent&) const = default;
};

// 4D light field stored [U,V,H,W,C] row-major with values in [0,1]. The
// angular row index u pairs with horizontal parallax along x, v with y.
class LightField {
 public:
  LightField() = default;
  // Values are clamped into [0,1].
  LightField(LfExtent extent, std::vector<float> values);
  static LightField filled(LfExtent extent, float value);

  const LfExtent& extent() const { return extent_; }
  std::span<const float> values() const { return values_; }

  std::int64_t index(int u, int v, int y, int x, int c) const {
    return ((((std::int64_t{u} * extent_.v + v) * extent_.h + y) * extent_.w + x) * extent_.c) + c;
  }
  float at(int u, int v, int y, int x, int c) const { return values_[index(u, v, y, x, c)]; }

 private:
  LfExtent extent_;
  std::vector<float> values_;
};

// View (u,v) as [C,H,W].
template <typename T = float>
Tensor<T> extract_view(const LightField& lf, int u, int v);

// View ((U-1)/2, (V-1)/2); requires odd angular extents.
template <typename T = float>
Tensor<T> central_view(const LightField& lf);

// Assembles a light field from u-major ordered [C,H,W] views (clamped).
template <typename T>
LightField from_views(int u_extent, int v_extent, const std::vector<Tensor<T>>& views);

// [U,V,H,W,C] <-> [C,U,V,H,W], the layout the networks operate on.
template <typename T>
Tensor<T> lf_to_tensor(const LightField& lf);
template <typename T>
LightField lf_from_tensor(const Tensor<T>& t);

LightField crop_spatial(const LightField& lf, int y0, int x0, int h, int w);

// Per-view bicubic downsampling by an integer factor.
LightField degrade_lf(const LightField& hr, int factor);

}  // namespace lfsr
