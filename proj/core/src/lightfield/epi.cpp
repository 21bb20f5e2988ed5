#include "lfsr/lightfield/epi.hpp"

#include <string>

#include "lfsr/numcore/errors.hpp"

namespace lfsr {

EpiSlice epi_extract(const LightField& lf, EpiOrientation orientation, int fixed_angular, int fixed_spatial) {
  const auto& e = lf.extent();
  const bool horizontal = orientation == EpiOrientation::kHorizontal;
  const int angular_limit = horizontal ? e.v : e.u;
  const int spatial_limit = horizontal ? e.h : e.w;
  if (fixed_angular < 0 || fixed_angular >= angular_limit || fixed_spatial < 0 || fixed_spatial >= spatial_limit) {
    throw ArgumentError("epi_extract: fixed indices (" + std::to_string(fixed_angular) + "," +
                        std::to_string(fixed_spatial) + ") out of range");
  }
  const int a_extent = horizontal ? e.u : e.v;
  const int s_extent = horizontal ? e.w : e.h;
  EpiSlice slice{orientation, fixed_angular, fixed_spatial, Tensor<float>(Shape{a_extent, s_extent, e.c})};
  auto out = slice.image.data_mut();
  for (int a = 0; a < a_extent; ++a) {
    for (int s = 0; s < s_extent; ++s) {
      for (int c = 0; c < e.c; ++c) {
        const float value = horizontal ? lf.at(a, fixed_angular, fixed_spatial, s, c)
                                       : lf.at(fixed_angular, a, s, fixed_spatial, c);
        out[(static_cast<std::int64_t>(a) * s_extent + s) * e.c + c] = value;
      }
    }
  }
  return slice;
}

}  // namespace lfsr
