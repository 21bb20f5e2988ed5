#include "lfsr/lfrefine/lfrefine.hpp"

#include <string>

#include "../detail/layers.hpp"
#include "lfsr/lightfield/interleaved.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"

namespace lfsr::lfrefine {
using detail::add_conv;
using detail::bias_of;
using detail::kernel_of;

template <typename T>
StageWeights<T> init_weights(std::uint64_t seed) {
  Rng rng(seed);
  StageWeights<T> w("lfrefine");
  add_conv(w, "head", {kWidth, 3, 3, 3}, rng);
  for (int i = 0; i < kInterleavedFilters; ++i) {
    add_conv(w, "inter" + std::to_string(i) + ".angular", {kWidth, kWidth, 3, 3}, rng);
    add_conv(w, "inter" + std::to_string(i) + ".spatial", {kWidth, kWidth, 3, 3}, rng);
  }
  add_conv(w, "tail", {3, kWidth, 3, 3}, rng, /*zero=*/true);
  return w;
}

template <typename T>
Tensor<T> forward(const Tensor<T>& sr_lf, const StageWeights<T>& w) {
  if (sr_lf.rank() != 5 || sr_lf.dim(0) != 3 || sr_lf.dim(1) != kAngular || sr_lf.dim(2) != kAngular) {
    throw ArgumentError("lfrefine: expected a 7x7 light field [3,7,7,H,W], got " + shape_string(sr_lf.shape()));
  }
  auto f = relu(spatial_conv(sr_lf, kernel_of(w, "head"), bias_of(w, "head")));
  for (int i = 0; i < kInterleavedFilters; ++i) {
    const std::string p = "inter" + std::to_string(i);
    f = relu(angular_conv(f, kernel_of(w, p + ".angular"), bias_of(w, p + ".angular")));
    f = relu(spatial_conv(f, kernel_of(w, p + ".spatial"), bias_of(w, p + ".spatial")));
  }
  auto residual = spatial_conv(f, kernel_of(w, "tail"), bias_of(w, "tail"));
  return clamp(add(sr_lf, residual), T(0), T(1));
}

template <typename T>
LightField forward(const LightField& sr_lf, const StageWeights<T>& weights) {
  const auto& e = sr_lf.extent();
  if (e.u != kAngular || e.v != kAngular || e.c != 3) {
    throw ArgumentError("lfrefine: expected a 7x7 RGB light field, got " + std::to_string(e.u) + "x" +
                        std::to_string(e.v));
  }
  return lf_from_tensor(forward(lf_to_tensor<T>(sr_lf), weights));
}

template <typename T>
Tensor<T> epi_loss(const Tensor<T>& pred, const Tensor<T>& gt) {
  if (pred.shape() != gt.shape() || pred.rank() != 5) {
    throw DimensionError("epi_loss: expected matching [C,U,V,H,W] tensors, got " + shape_string(pred.shape()) +
                         " and " + shape_string(gt.shape()));
  }
  const auto err = sub(pred, gt);
  Tensor<T> total;
  // Axes 1..4 are u, v, y, x.
  for (std::size_t axis = 1; axis <= 4; ++axis) {
    if (err.dim(axis) < 2) continue;
    auto term = mean_abs(forward_difference(err, axis));
    total = total.defined() ? add(total, term) : term;
  }
  if (!total.defined()) return Tensor<T>::scalar(T(0));
  return scale(total, T(0.25));
}

double epi_loss(const LightField& pred, const LightField& gt) {
  if (!(pred.extent() == gt.extent())) throw DimensionError("epi_loss: light-field extents differ");
  return static_cast<double>(epi_loss(lf_to_tensor<double>(pred), lf_to_tensor<double>(gt)).item());
}

template StageWeights<float> init_weights<float>(std::uint64_t);
template StageWeights<double> init_weights<double>(std::uint64_t);
template Tensor<float> forward(const Tensor<float>&, const StageWeights<float>&);
template Tensor<double> forward(const Tensor<double>&, const StageWeights<double>&);
template LightField forward(const LightField&, const StageWeights<float>&);
template LightField forward(const LightField&, const StageWeights<double>&);
template Tensor<float> epi_loss(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> epi_loss(const Tensor<double>&, const Tensor<double>&);

}  // namespace lfsr::lfrefine
