#include "lfsr/ahqrg/ahqrg.hpp"

#include <array>
#include <string>

#include "lfsr/lightfield/interleaved.hpp"
#include "lfsr/numcore/conv.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"
#include "lfsr/numcore/random.hpp"
#include "lfsr/numcore/resample.hpp"
#include "../detail/layers.hpp"

namespace lfsr::ahqrg {
using detail::add_conv;
using detail::bias_of;
using detail::kernel_of;

namespace {

constexpr int kViews = kAngular * kAngular;

}  // namespace

template <typename T>
StageWeights<T> init_weights(std::uint64_t seed) {
  Rng rng(seed);
  StageWeights<T> w("ahqrg");
  add_conv(w, "head0", {kWidth, 3, 3, 3}, rng);
  add_conv(w, "head1", {kWidth, kWidth, 3, 3}, rng);
  for (int i = 0; i < kInterleavedFilters; ++i) {
    add_conv(w, "inter" + std::to_string(i) + ".angular", {kWidth, kWidth, 3, 3}, rng);
    add_conv(w, "inter" + std::to_string(i) + ".spatial", {kWidth, kWidth, 3, 3}, rng);
  }
  for (int i = 0; i < kVolumeLayers; ++i) add_conv(w, "volume" + std::to_string(i), {kWidth, kWidth, 3, 3, 3}, rng);
  add_conv(w, "collapse", {kWidth, kWidth, kViews, 1, 1}, rng);
  add_conv(w, "up0", {kWidth * 4, kWidth, 3, 3}, rng);
  add_conv(w, "up1", {kWidth * 4, kWidth, 3, 3}, rng);
  add_conv(w, "tail", {3, kWidth, 3, 3}, rng, /*zero=*/true);
  return w;
}

template <typename T>
Tensor<T> forward(const Tensor<T>& lr_lf, const StageWeights<T>& w) {
  if (lr_lf.rank() != 5 || lr_lf.dim(0) != 3 || lr_lf.dim(1) != kAngular || lr_lf.dim(2) != kAngular) {
    throw ArgumentError("ahqrg: expected a 7x7 light field [3,7,7,h,w], got " + shape_string(lr_lf.shape()));
  }
  const std::int64_t h = lr_lf.dim(3), wd = lr_lf.dim(4);

  auto f = relu(spatial_conv(lr_lf, kernel_of(w, "head0"), bias_of(w, "head0")));
  f = relu(spatial_conv(f, kernel_of(w, "head1"), bias_of(w, "head1")));
  for (int i = 0; i < kInterleavedFilters; ++i) {
    const std::string p = "inter" + std::to_string(i);
    f = relu(angular_conv(f, kernel_of(w, p + ".angular"), bias_of(w, p + ".angular")));
    f = relu(spatial_conv(f, kernel_of(w, p + ".spatial"), bias_of(w, p + ".spatial")));
  }

  auto vol = reshape(f, Shape{kWidth, kViews, h, wd});
  for (int i = 0; i < kVolumeLayers; ++i) {
    const std::string p = "volume" + std::to_string(i);
    vol = relu(conv3d(vol, kernel_of(w, p), bias_of(w, p), 1, {1, 1, 1}));
  }
  auto single = conv3d(vol, kernel_of(w, "collapse"), bias_of(w, "collapse"), 1, {0, 0, 0});
  auto g = reshape(single, Shape{kWidth, h, wd});

  g = relu(pixel_shuffle(conv2d(g, kernel_of(w, "up0"), bias_of(w, "up0"), 1, 1), 2));
  g = relu(pixel_shuffle(conv2d(g, kernel_of(w, "up1"), bias_of(w, "up1"), 1, 1), 2));
  auto residual = conv2d(g, kernel_of(w, "tail"), bias_of(w, "tail"), 1, 1);

  // Central view [3,h,w] sliced out of the [3,7,7,h,w] input.
  const std::int64_t plane = h * wd;
  const std::int64_t centre = (kAngular / 2) * kAngular + kAngular / 2;
  Tensor<T> central(Shape{3, h, wd});
  auto src = lr_lf.data();
  auto dst = central.data_mut();
  for (std::int64_t c = 0; c < 3; ++c)
    std::copy_n(src.data() + (c * kViews + centre) * plane, plane, dst.data() + c * plane);
  auto base = bicubic_resize(central, Scale{kUpscale, 1});
  return clamp(add(base, residual), T(0), T(1));
}

template <typename T>
Tensor<T> forward(const LightField& lr_lf, const StageWeights<T>& weights) {
  const auto& e = lr_lf.extent();
  if (e.u != kAngular || e.v != kAngular || e.c != 3) {
    throw ArgumentError("ahqrg: expected a 7x7 RGB light field, got " + std::to_string(e.u) + "x" +
                        std::to_string(e.v));
  }
  return forward(lf_to_tensor<T>(lr_lf), weights);
}

template StageWeights<float> init_weights<float>(std::uint64_t);
template StageWeights<double> init_weights<double>(std::uint64_t);
template Tensor<float> forward(const Tensor<float>&, const StageWeights<float>&);
template Tensor<double> forward(const Tensor<double>&, const StageWeights<double>&);
template Tensor<float> forward(const LightField&, const StageWeights<float>&);
template Tensor<double> forward(const LightField&, const StageWeights<double>&);

}  // namespace lfsr::ahqrg
