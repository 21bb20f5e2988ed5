#include "lfsr/lightfield/metrics.hpp"

#include <cmath>

#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {

template <typename T>
double psnr_impl(std::span<const T> a, std::span<const T> b, double peak) {
  if (a.size() != b.size() || a.empty()) {
    throw DimensionError("psnr: inputs differ in size (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  // Neumaier summation; a plain running sum drifts by ~1e-14 relative on a
  // few hundred equal terms, which shows in the last digits of the dB value.
  double sse = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    const double term = d * d;
    const double t = sse + term;
    carry += std::abs(sse) >= term ? (sse - t) + term : (term - t) + sse;
    sse = t;
  }
  const double mse = (sse + carry) / static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrCapDb;
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace

double psnr(std::span<const float> a, std::span<const float> b, double peak) { return psnr_impl(a, b, peak); }
double psnr(std::span<const double> a, std::span<const double> b, double peak) { return psnr_impl(a, b, peak); }

template <typename T>
double psnr(const Tensor<T>& a, const Tensor<T>& b, double peak) {
  if (a.shape() != b.shape()) {
    throw DimensionError("psnr: shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  return psnr_impl(a.data(), b.data(), peak);
}

template double psnr(const Tensor<float>&, const Tensor<float>&, double);
template double psnr(const Tensor<double>&, const Tensor<double>&, double);

}  // namespace lfsr
