#pragma once

#include <span>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

// Reported for identical inputs instead of +inf.
inline constexpr double kPsnrCapDb = 100.0;

// 10*log10(peak^2 / MSE) over all entries (RGB mean when given colour
// views); MSE == 0 yields kPsnrCapDb.
double psnr(std::span<const float> a, std::span<const float> b, double peak = 1.0);
double psnr(std::span<const double> a, std::span<const double> b, double peak = 1.0);

template <typename T>
double psnr(const Tensor<T>& a, const Tensor<T>& b, double peak = 1.0);

}  // namespace lfsr
