#pragma once

#include <cstdint>

#include "lfsr/lightfield/lightfield.hpp"
#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/tensor.hpp"

// Joint refinement of independently super-resolved views.
namespace lfsr::lfrefine {

inline constexpr int kAngular = 7;
inline constexpr int kWidth = 32;
inline constexpr int kInterleavedFilters = 3;

template <typename T>
StageWeights<T> init_weights(std::uint64_t seed);

// [3,7,7,H,W] -> clamp(input + residual, 0, 1), same shape.
template <typename T>
Tensor<T> forward(const Tensor<T>& sr_lf, const StageWeights<T>& weights);

template <typename T>
LightField forward(const LightField& sr_lf, const StageWeights<T>& weights);

// EPI gradient-matching loss on [C,U,V,H,W] tensors. With e = pred - gt,
//   loss = (mean|d_u e| + mean|d_x e| + mean|d_v e| + mean|d_y e|) / 4,
// i.e. the mean over horizontal EPIs (fixed v,y) of their angular and
// spatial forward-difference errors, averaged with the same quantity over
// vertical EPIs (fixed u,x). Terms along axes of extent 1 contribute 0.
template <typename T>
Tensor<T> epi_loss(const Tensor<T>& pred, const Tensor<T>& gt);

double epi_loss(const LightField& pred, const LightField& gt);

}  // namespace lfsr::lfrefine
