#pragma once

// Brute-force reference implementations. These index raw buffers directly
// and share no code with the library beyond the Tensor container.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lfsr/lightfield/lightfield.hpp"
#include "lfsr/numcore/tensor.hpp"

namespace oracle {

using lfsr::Shape;
using lfsr::Tensor;

inline Tensor<double> conv2d(const Tensor<double>& in, const Tensor<double>& k, const Tensor<double>& b, int stride,
                             int pad) {
  const auto ci = in.dim(0), H = in.dim(1), W = in.dim(2);
  const auto co = k.dim(0), kh = k.dim(2), kw = k.dim(3);
  const auto ho = (H + 2 * pad - kh) / stride + 1, wo = (W + 2 * pad - kw) / stride + 1;
  Tensor<double> out(Shape{co, ho, wo});
  auto o = out.data_mut();
  auto x = in.data();
  auto w = k.data();
  for (std::int64_t m = 0; m < co; ++m)
    for (std::int64_t y = 0; y < ho; ++y)
      for (std::int64_t xx = 0; xx < wo; ++xx) {
        double acc = b.data()[m];
        for (std::int64_t c = 0; c < ci; ++c)
          for (std::int64_t i = 0; i < kh; ++i)
            for (std::int64_t j = 0; j < kw; ++j) {
              const auto sy = y * stride - pad + i, sx = xx * stride - pad + j;
              if (sy < 0 || sy >= H || sx < 0 || sx >= W) continue;
              acc += w[((m * ci + c) * kh + i) * kw + j] * x[(c * H + sy) * W + sx];
            }
        o[(m * ho + y) * wo + xx] = acc;
      }
  return out;
}

inline Tensor<double> conv3d(const Tensor<double>& in, const Tensor<double>& k, const Tensor<double>& b, int stride,
                             std::array<int, 3> pad) {
  const auto ci = in.dim(0), D = in.dim(1), H = in.dim(2), W = in.dim(3);
  const auto co = k.dim(0), kd = k.dim(2), kh = k.dim(3), kw = k.dim(4);
  const auto d_o = (D + 2 * pad[0] - kd) / stride + 1;
  const auto ho = (H + 2 * pad[1] - kh) / stride + 1;
  const auto wo = (W + 2 * pad[2] - kw) / stride + 1;
  Tensor<double> out(Shape{co, d_o, ho, wo});
  auto o = out.data_mut();
  auto x = in.data();
  auto w = k.data();
  for (std::int64_t m = 0; m < co; ++m)
    for (std::int64_t z = 0; z < d_o; ++z)
      for (std::int64_t y = 0; y < ho; ++y)
        for (std::int64_t xx = 0; xx < wo; ++xx) {
          double acc = b.data()[m];
          for (std::int64_t c = 0; c < ci; ++c)
            for (std::int64_t a = 0; a < kd; ++a)
              for (std::int64_t i = 0; i < kh; ++i)
                for (std::int64_t j = 0; j < kw; ++j) {
                  const auto sz = z * stride - pad[0] + a;
                  const auto sy = y * stride - pad[1] + i;
                  const auto sx = xx * stride - pad[2] + j;
                  if (sz < 0 || sz >= D || sy < 0 || sy >= H || sx < 0 || sx >= W) continue;
                  acc += w[(((m * ci + c) * kd + a) * kh + i) * kw + j] * x[((c * D + sz) * H + sy) * W + sx];
                }
          o[((m * d_o + z) * ho + y) * wo + xx] = acc;
        }
  return out;
}

// Keys cubic convolution, a = -0.5, written out piecewise.
inline double cubic(double t) {
  t = std::abs(t);
  if (t <= 1.0) return 1.5 * t * t * t - 2.5 * t * t + 1.0;
  if (t < 2.0) return -0.5 * t * t * t + 2.5 * t * t - 4.0 * t + 2.0;
  return 0.0;
}

// Non-separable evaluation of the 4x4 stencil at every output pixel.
inline Tensor<double> bicubic(const Tensor<double>& in, std::int64_t num, std::int64_t den) {
  const auto C = in.dim(0), H = in.dim(1), W = in.dim(2);
  const auto ho = static_cast<std::int64_t>(std::floor(static_cast<double>(H) * num / den + 0.5));
  const auto wo = static_cast<std::int64_t>(std::floor(static_cast<double>(W) * num / den + 0.5));
  Tensor<double> out(Shape{C, ho, wo});
  const double step = static_cast<double>(den) / static_cast<double>(num);
  for (std::int64_t c = 0; c < C; ++c)
    for (std::int64_t y = 0; y < ho; ++y)
      for (std::int64_t x = 0; x < wo; ++x) {
        const double sy = (y + 0.5) * step - 0.5, sx = (x + 0.5) * step - 0.5;
        const auto fy = static_cast<std::int64_t>(std::floor(sy)), fx = static_cast<std::int64_t>(std::floor(sx));
        double acc = 0.0;
        for (std::int64_t iy = fy - 1; iy <= fy + 2; ++iy)
          for (std::int64_t ix = fx - 1; ix <= fx + 2; ++ix) {
            const auto cy = std::clamp<std::int64_t>(iy, 0, H - 1), cx = std::clamp<std::int64_t>(ix, 0, W - 1);
            acc += cubic(sy - static_cast<double>(iy)) * cubic(sx - static_cast<double>(ix)) *
                   in.data()[(c * H + cy) * W + cx];
          }
        out.data_mut()[(c * ho + y) * wo + x] = acc;
      }
  return out;
}

// Patch (py, px) of the sliding window as a flat (channel, dy, dx) vector.
inline std::vector<double> patch(const Tensor<double>& f, std::int64_t py, std::int64_t px, int k, int stride,
                                 int pad) {
  const auto C = f.dim(0), H = f.dim(1), W = f.dim(2);
  std::vector<double> p;
  for (std::int64_t c = 0; c < C; ++c)
    for (int dy = 0; dy < k; ++dy)
      for (int dx = 0; dx < k; ++dx) {
        const auto y = py * stride - pad + dy, x = px * stride - pad + dx;
        p.push_back(y < 0 || y >= H || x < 0 || x >= W ? 0.0 : f.data()[(c * H + y) * W + x]);
      }
  return p;
}

inline Tensor<double> unfold(const Tensor<double>& f, int k, int stride, int pad) {
  const auto C = f.dim(0), H = f.dim(1), W = f.dim(2);
  const auto ny = (H + 2 * pad - k) / stride + 1, nx = (W + 2 * pad - k) / stride + 1;
  Tensor<double> out(Shape{ny * nx, C * k * k});
  std::int64_t n = 0;
  for (std::int64_t py = 0; py < ny; ++py)
    for (std::int64_t px = 0; px < nx; ++px, ++n) {
      const auto p = patch(f, py, px, k, stride, pad);
      std::copy(p.begin(), p.end(), out.data_mut().begin() + n * C * k * k);
    }
  return out;
}

// For every pixel, scans all patches for the taps that land on it.
inline Tensor<double> fold(const Tensor<double>& patches, int k, int stride, int pad, std::int64_t C, std::int64_t H,
                           std::int64_t W) {
  const auto ny = (H + 2 * pad - k) / stride + 1, nx = (W + 2 * pad - k) / stride + 1;
  Tensor<double> out(Shape{C, H, W});
  for (std::int64_t c = 0; c < C; ++c)
    for (std::int64_t y = 0; y < H; ++y)
      for (std::int64_t x = 0; x < W; ++x) {
        double acc = 0.0;
        int count = 0;
        for (std::int64_t py = 0; py < ny; ++py)
          for (std::int64_t px = 0; px < nx; ++px) {
            const auto dy = y - (py * stride - pad), dx = x - (px * stride - pad);
            if (dy < 0 || dy >= k || dx < 0 || dx >= k) continue;
            acc += patches.data()[(py * nx + px) * C * k * k + (c * k + dy) * k + dx];
            ++count;
          }
        out.data_mut()[(c * H + y) * W + x] = count > 0 ? acc / count : 0.0;
      }
  return out;
}

// Cosine similarity of every 3x3 (pad 1) query patch with every key patch.
inline Tensor<double> relevance(const Tensor<double>& q, const Tensor<double>& k) {
  const auto nq = q.dim(1) * q.dim(2), nk = k.dim(1) * k.dim(2);
  Tensor<double> out(Shape{nq, nk});
  for (std::int64_t i = 0; i < nq; ++i) {
    const auto a = patch(q, i / q.dim(2), i % q.dim(2), 3, 1, 1);
    double na = 0;
    for (double v : a) na += v * v;
    na = std::max(std::sqrt(na), 1e-12);
    for (std::int64_t j = 0; j < nk; ++j) {
      const auto b = patch(k, j / k.dim(2), j % k.dim(2), 3, 1, 1);
      double nb = 0, d = 0;
      for (std::size_t t = 0; t < a.size(); ++t) {
        nb += b[t] * b[t];
        d += a[t] * b[t];
      }
      nb = std::max(std::sqrt(nb), 1e-12);
      out.data_mut()[i * nk + j] = d / (na * nb);
    }
  }
  return out;
}

// Walks every horizontal EPI (fixed v, y) and vertical EPI (fixed u, x) of
// pred - gt, averaging |angular step| and |spatial step| per slice family.
inline double epi_loss(const lfsr::LightField& pred, const lfsr::LightField& gt) {
  const auto& e = gt.extent();
  auto err = [&](int u, int v, int y, int x, int c) { return pred.at(u, v, y, x, c) - double(gt.at(u, v, y, x, c)); };
  double h_ang = 0, h_sp = 0, v_ang = 0, v_sp = 0;
  double n_h_ang = 0, n_h_sp = 0, n_v_ang = 0, n_v_sp = 0;
  for (int v = 0; v < e.v; ++v)
    for (int y = 0; y < e.h; ++y)
      for (int u = 0; u < e.u; ++u)
        for (int x = 0; x < e.w; ++x)
          for (int c = 0; c < e.c; ++c) {
            if (u + 1 < e.u) h_ang += std::abs(err(u + 1, v, y, x, c) - err(u, v, y, x, c)), ++n_h_ang;
            if (x + 1 < e.w) h_sp += std::abs(err(u, v, y, x + 1, c) - err(u, v, y, x, c)), ++n_h_sp;
          }
  for (int u = 0; u < e.u; ++u)
    for (int x = 0; x < e.w; ++x)
      for (int v = 0; v < e.v; ++v)
        for (int y = 0; y < e.h; ++y)
          for (int c = 0; c < e.c; ++c) {
            if (v + 1 < e.v) v_ang += std::abs(err(u, v + 1, y, x, c) - err(u, v, y, x, c)), ++n_v_ang;
            if (y + 1 < e.h) v_sp += std::abs(err(u, v, y + 1, x, c) - err(u, v, y, x, c)), ++n_v_sp;
          }
  auto avg = [](double s, double n) { return n > 0 ? s / n : 0.0; };
  return 0.25 * (avg(h_ang, n_h_ang) + avg(h_sp, n_h_sp) + avg(v_ang, n_v_ang) + avg(v_sp, n_v_sp));
}

// Entry-wise relative difference; entries far below the tensor's peak
// magnitude (cancellation residue) are measured against 1e-3 of that peak.
inline double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return INFINITY;
  double peak = 0;
  for (double v : b) peak = std::max(peak, std::abs(v));
  const double floor = std::max(1e-3 * peak, 1e-300);
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace oracle
