#pragma once

#include <string>

#include "lfsr/numcore/conv.hpp"
#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/random.hpp"

namespace lfsr::detail {

// Registers "<name>.weight" (fan-in uniform, or zeros) and "<name>.bias"
// (zeros).
template <typename T>
void add_conv(StageWeights<T>& w, const std::string& name, Shape kernel_shape, Rng& rng, bool zero = false) {
  std::int64_t fan_in = 1;
  for (std::size_t i = 1; i < kernel_shape.size(); ++i) fan_in *= kernel_shape[i];
  const std::int64_t out = kernel_shape[0];
  w.add(name + ".weight", zero ? Tensor<T>(kernel_shape) : fan_in_uniform<T>(kernel_shape, fan_in, rng));
  w.add(name + ".bias", Tensor<T>(Shape{out}));
}

template <typename T>
const Tensor<T>& kernel_of(const StageWeights<T>& w, const std::string& layer) {
  return w.at(layer + ".weight");
}

template <typename T>
const Tensor<T>& bias_of(const StageWeights<T>& w, const std::string& layer) {
  return w.at(layer + ".bias");
}

// Square-kernel conv2d through a named layer, padding k/2.
template <typename T>
Tensor<T> conv_layer(const Tensor<T>& x, const StageWeights<T>& w, const std::string& layer, int stride = 1) {
  const auto& k = kernel_of(w, layer);
  return conv2d(x, k, bias_of(w, layer), stride, static_cast<int>(k.dim(2) / 2));
}

}  // namespace lfsr::detail
