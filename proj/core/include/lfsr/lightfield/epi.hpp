#pragma once

#include "lfsr/lightfield/lightfield.hpp"

namespace lfsr {

enum class EpiOrientation { kHorizontal, kVertical };

// Epipolar plane image. Horizontal slices fix (v, y) and vary (u, x);
// vertical slices fix (u, x) and vary (v, y). `image` is [A, S, C].
struct EpiSlice {
  EpiOrientation orientation = EpiOrientation::kHorizontal;
  int fixed_angular = 0;
  int fixed_spatial = 0;
  Tensor<float> image;
};

EpiSlice epi_extract(const LightField& lf, EpiOrientation orientation, int fixed_angular, int fixed_spatial);

}  // namespace lfsr
