#include "lfsr/lightfield/interleaved.hpp"

#include <array>

#include "lfsr/numcore/conv.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"

namespace lfsr {
namespace {

template <typename T>
int check_kernel(const Tensor<T>& features, const Tensor<T>& kernel, const char* op) {
  if (features.rank() != 5) {
    throw DimensionError(std::string(op) + ": expected [Ch,U,V,H,W], got " + shape_string(features.shape()));
  }
  if (kernel.rank() != 4 || kernel.dim(2) != kernel.dim(3) || kernel.dim(2) % 2 == 0) {
    throw DimensionError(std::string(op) + ": kernel must be [Ch_out,Ch_in,k,k] with odd k");
  }
  return static_cast<int>(kernel.dim(2));
}

}  // namespace

template <typename T>
Tensor<T> spatial_conv(const Tensor<T>& features, const Tensor<T>& kernel, const Tensor<T>& bias) {
  const int k = check_kernel(features, kernel, "spatial_conv");
  auto k4 = reshape(kernel, Shape{kernel.dim(0), kernel.dim(1), 1, 1, k, k});
  const std::array<int, 4> stride{1, 1, 1, 1};
  const std::array<int, 4> pad{0, 0, k / 2, k / 2};
  return convnd(features, k4, bias, stride, pad);
}

template <typename T>
Tensor<T> angular_conv(const Tensor<T>& features, const Tensor<T>& kernel, const Tensor<T>& bias) {
  const int k = check_kernel(features, kernel, "angular_conv");
  auto k4 = reshape(kernel, Shape{kernel.dim(0), kernel.dim(1), k, k, 1, 1});
  const std::array<int, 4> stride{1, 1, 1, 1};
  const std::array<int, 4> pad{k / 2, k / 2, 0, 0};
  return convnd(features, k4, bias, stride, pad);
}

template Tensor<float> spatial_conv(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> spatial_conv(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template Tensor<float> angular_conv(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> angular_conv(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);

}  // namespace lfsr
