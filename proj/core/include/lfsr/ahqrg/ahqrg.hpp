#pragma once

#include <cstdint>

#include "lfsr/lightfield/lightfield.hpp"
#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/tensor.hpp"

namespace lfsr::ahqrg {

inline constexpr int kAngular = 7;
inline constexpr int kWidth = 32;
inline constexpr int kInterleavedFilters = 4;
inline constexpr int kVolumeLayers = 3;
inline constexpr int kUpscale = 4;

// Fresh weights: fan-in scaled uniform everywhere except the residual tail,
// which starts at exactly zero.
template <typename T>
StageWeights<T> init_weights(std::uint64_t seed);

// Reference generator: a 7x7 low-resolution light field, given as the
// [3,7,7,h,w] network layout, to one [3,4h,4w] central view,
//   clamp(bicubic_x4(central view) + residual, 0, 1).
template <typename T>
Tensor<T> forward(const Tensor<T>& lr_lf, const StageWeights<T>& weights);

template <typename T>
Tensor<T> forward(const LightField& lr_lf, const StageWeights<T>& weights);

}  // namespace lfsr::ahqrg
