#include "lfsr/lightfield/lightfield.hpp"

#include <algorithm>
#include <string>

#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/resample.hpp"

namespace lfsr {
namespace {

void check_extent(const LfExtent& e) {
  if (e.u < 1 || e.v < 1 || e.h < 1 || e.w < 1 || e.c < 1) {
    throw DimensionError("light field extents must be positive");
  }
}

}  // namespace

LightField::LightField(LfExtent extent, std::vector<float> values)
    : extent_(extent), values_(std::move(values)) {
  check_extent(extent_);
  if (static_cast<std::int64_t>(values_.size()) != extent_.count()) {
    throw DimensionError("light field expects " + std::to_string(extent_.count()) + " values, got " +
                         std::to_string(values_.size()));
  }
  for (auto& v : values_) v = std::clamp(v, 0.0f, 1.0f);
}

LightField LightField::filled(LfExtent extent, float value) {
  return LightField(extent, std::vector<float>(static_cast<std::size_t>(extent.count()), value));
}

template <typename T>
Tensor<T> extract_view(const LightField& lf, int u, int v) {
  const auto& e = lf.extent();
  if (u < 0 || u >= e.u || v < 0 || v >= e.v) {
    throw ArgumentError("extract_view: index (" + std::to_string(u) + "," + std::to_string(v) +
                        ") outside " + std::to_string(e.u) + "x" + std::to_string(e.v));
  }
  Tensor<T> out(Shape{e.c, e.h, e.w});
  auto o = out.data_mut();
  auto src = lf.values().subspan(static_cast<std::size_t>(lf.index(u, v, 0, 0, 0)),
                                 static_cast<std::size_t>(std::int64_t{e.h} * e.w * e.c));
  const std::int64_t plane = std::int64_t{e.h} * e.w;
  for (std::int64_t p = 0; p < plane; ++p)
    for (int c = 0; c < e.c; ++c) o[c * plane + p] = static_cast<T>(src[p * e.c + c]);
  return out;
}

template <typename T>
Tensor<T> central_view(const LightField& lf) {
  const auto& e = lf.extent();
  if (e.u % 2 == 0 || e.v % 2 == 0) {
    throw ArgumentError("central_view: angular extents " + std::to_string(e.u) + "x" + std::to_string(e.v) +
                        " have no central view");
  }
  return extract_view<T>(lf, (e.u - 1) / 2, (e.v - 1) / 2);
}

template <typename T>
LightField from_views(int u_extent, int v_extent, const std::vector<Tensor<T>>& views) {
  if (static_cast<int>(views.size()) != u_extent * v_extent || views.empty()) {
    throw DimensionError("from_views: expected " + std::to_string(u_extent * v_extent) + " views");
  }
  const Shape& shape = views.front().shape();
  if (shape.size() != 3) throw DimensionError("from_views: views must be [C,H,W]");
  LfExtent e{u_extent, v_extent, static_cast<int>(shape[1]), static_cast<int>(shape[2]), static_cast<int>(shape[0])};
  std::vector<float> values(static_cast<std::size_t>(e.count()));
  const std::int64_t plane = std::int64_t{e.h} * e.w;
  for (std::size_t k = 0; k < views.size(); ++k) {
    if (views[k].shape() != shape) throw DimensionError("from_views: views differ in shape");
    auto d = views[k].data();
    float* dst = values.data() + static_cast<std::int64_t>(k) * plane * e.c;
    for (std::int64_t p = 0; p < plane; ++p)
      for (int c = 0; c < e.c; ++c) dst[p * e.c + c] = static_cast<float>(d[c * plane + p]);
  }
  return LightField(e, std::move(values));
}

template <typename T>
Tensor<T> lf_to_tensor(const LightField& lf) {
  const auto& e = lf.extent();
  const std::int64_t cells = std::int64_t{e.u} * e.v * e.h * e.w;
  Tensor<T> out(Shape{e.c, e.u, e.v, e.h, e.w});
  auto o = out.data_mut();
  auto src = lf.values();
  for (std::int64_t p = 0; p < cells; ++p)
    for (int c = 0; c < e.c; ++c) o[c * cells + p] = static_cast<T>(src[p * e.c + c]);
  return out;
}

template <typename T>
LightField lf_from_tensor(const Tensor<T>& t) {
  if (t.rank() != 5) throw DimensionError("lf_from_tensor: expected [C,U,V,H,W], got " + shape_string(t.shape()));
  LfExtent e{static_cast<int>(t.dim(1)), static_cast<int>(t.dim(2)), static_cast<int>(t.dim(3)),
             static_cast<int>(t.dim(4)), static_cast<int>(t.dim(0))};
  const std::int64_t cells = std::int64_t{e.u} * e.v * e.h * e.w;
  std::vector<float> values(static_cast<std::size_t>(e.count()));
  auto d = t.data();
  for (std::int64_t p = 0; p < cells; ++p)
    for (int c = 0; c < e.c; ++c) values[p * e.c + c] = static_cast<float>(d[c * cells + p]);
  return LightField(e, std::move(values));
}

LightField crop_spatial(const LightField& lf, int y0, int x0, int h, int w) {
  const auto& e = lf.extent();
  if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > e.h || x0 + w > e.w) {
    throw ArgumentError("crop_spatial: window outside the light field");
  }
  LfExtent ce{e.u, e.v, h, w, e.c};
  std::vector<float> values;
  values.reserve(static_cast<std::size_t>(ce.count()));
  auto src = lf.values();
  for (int u = 0; u < e.u; ++u)
    for (int v = 0; v < e.v; ++v)
      for (int y = 0; y < h; ++y) {
        auto row = src.subspan(static_cast<std::size_t>(lf.index(u, v, y0 + y, x0, 0)),
                               static_cast<std::size_t>(w * e.c));
        values.insert(values.end(), row.begin(), row.end());
      }
  return LightField(ce, std::move(values));
}

LightField degrade_lf(const LightField& hr, int factor) {
  const auto& e = hr.extent();
  if (factor < 1 || e.h % factor != 0 || e.w % factor != 0) {
    throw ArgumentError("degrade_lf: spatial extents " + std::to_string(e.h) + "x" + std::to_string(e.w) +
                        " not divisible by " + std::to_string(factor));
  }
  std::vector<Tensor<float>> views;
  views.reserve(static_cast<std::size_t>(e.u * e.v));
  for (int u = 0; u < e.u; ++u)
    for (int v = 0; v < e.v; ++v) views.push_back(bicubic_resize(extract_view<float>(hr, u, v), Scale{1, factor}));
  return from_views(e.u, e.v, views);
}

template Tensor<float> extract_view<float>(const LightField&, int, int);
template Tensor<double> extract_view<double>(const LightField&, int, int);
template Tensor<float> central_view<float>(const LightField&);
template Tensor<double> central_view<double>(const LightField&);
template LightField from_views(int, int, const std::vector<Tensor<float>>&);
template LightField from_views(int, int, const std::vector<Tensor<double>>&);
template Tensor<float> lf_to_tensor<float>(const LightField&);
template Tensor<double> lf_to_tensor<double>(const LightField&);
template LightField lf_from_tensor(const Tensor<float>&);
template LightField lf_from_tensor(const Tensor<double>&);

}  // namespace lfsr
