#include "lfsr/numcore/conv.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <vector>

#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/record.hpp"

namespace lfsr {
namespace {

constexpr int kMaxAxes = 4;
// Upper bound on im2col buffer entries per chunk.
constexpr std::int64_t kColumnBudget = std::int64_t{1} << 22;

struct ConvPlan {
  std::int64_t c_in = 0, c_out = 0;
  std::array<std::int64_t, kMaxAxes> ext{1, 1, 1, 1};
  std::array<std::int64_t, kMaxAxes> ker{1, 1, 1, 1};
  std::array<std::int64_t, kMaxAxes> str{1, 1, 1, 1};
  std::array<std::int64_t, kMaxAxes> pad{0, 0, 0, 0};
  std::array<std::int64_t, kMaxAxes> out{1, 1, 1, 1};
  std::int64_t in_plane = 1;   // product of input extents
  std::int64_t out_plane = 1;  // N, product of output extents
  std::int64_t ker_plane = 1;  // product of kernel extents
  std::int64_t rows = 0;       // K = c_in * ker_plane
  bool pointwise = false;      // 1x..x1 kernel, unit stride, no padding
  Shape out_shape;             // [C_out, outputs per original axis]
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

template <typename T>
ConvPlan make_plan(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                   std::span<const int> stride, std::span<const int> pad) {
  const std::size_t axes = input.rank() - 1;
  if (input.rank() < 2 || axes > kMaxAxes) {
    throw DimensionError("convnd: input must have 1 to 4 spatial axes, got " +
                         shape_string(input.shape()));
  }
  if (kernel.rank() != axes + 2) {
    throw DimensionError("convnd: kernel rank does not match input " + shape_string(kernel.shape()));
  }
  if (stride.size() != axes || pad.size() != axes) {
    throw ArgumentError("convnd: stride/pad must list one value per spatial axis");
  }
  ConvPlan p;
  p.c_in = input.dim(0);
  p.c_out = kernel.dim(0);
  if (kernel.dim(1) != p.c_in) {
    throw DimensionError("convnd: kernel expects " + std::to_string(kernel.dim(1)) +
                         " input channels, input has " + std::to_string(p.c_in));
  }
  if (bias.rank() != 1 || bias.dim(0) != p.c_out) {
    throw DimensionError("convnd: bias must be [" + std::to_string(p.c_out) + "]");
  }
  const std::size_t lead = kMaxAxes - axes;
  p.pointwise = true;
  for (std::size_t a = 0; a < axes; ++a) {
    const std::size_t slot = lead + a;
    p.ext[slot] = input.dim(a + 1);
    p.ker[slot] = kernel.dim(a + 2);
    p.str[slot] = stride[a];
    p.pad[slot] = pad[a];
    if (stride[a] < 1) throw ArgumentError("convnd: stride must be >= 1");
    if (pad[a] < 0) throw ArgumentError("convnd: pad must be >= 0");
    if (p.ext[slot] + 2 * p.pad[slot] < p.ker[slot]) {
      throw DimensionError("convnd: padded extent smaller than kernel on axis " + std::to_string(a));
    }
    p.out[slot] = (p.ext[slot] + 2 * p.pad[slot] - p.ker[slot]) / p.str[slot] + 1;
    p.pointwise = p.pointwise && p.ker[slot] == 1 && p.str[slot] == 1 && p.pad[slot] == 0;
  }
  p.out_shape = {p.c_out};
  for (std::size_t a = lead; a < kMaxAxes; ++a) p.out_shape.push_back(p.out[a]);
  // Neighbouring axes that the kernel does not touch behave as one longer
  // axis; merging them lengthens the contiguous inner runs.
  for (int a = kMaxAxes - 1; a > 0; --a) {
    const bool plain_a = p.ker[a] == 1 && p.str[a] == 1 && p.pad[a] == 0;
    const bool plain_b = p.ker[a - 1] == 1 && p.str[a - 1] == 1 && p.pad[a - 1] == 0;
    if (!plain_a || !plain_b || p.ext[a - 1] == 1) continue;
    p.ext[a] *= p.ext[a - 1];
    p.out[a] *= p.out[a - 1];
    for (int b = a - 1; b > 0; --b) {
      p.ext[b] = p.ext[b - 1];
      p.ker[b] = p.ker[b - 1];
      p.str[b] = p.str[b - 1];
      p.pad[b] = p.pad[b - 1];
      p.out[b] = p.out[b - 1];
    }
    p.ext[0] = p.ker[0] = p.str[0] = p.out[0] = 1;
    p.pad[0] = 0;
    ++a;  // re-examine the merged axis with its new neighbour
  }
  for (int a = 0; a < kMaxAxes; ++a) {
    p.in_plane *= p.ext[a];
    p.out_plane *= p.out[a];
    p.ker_plane *= p.ker[a];
  }
  p.rows = p.c_in * p.ker_plane;
  return p;
}

// Source index along each outer axis for every output position of one
// kernel offset, or -1 inside the padding.
struct RowWalk {
  std::array<std::vector<std::int64_t>, kMaxAxes - 1> index;
  std::int64_t lo3 = 0, hi3 = 0;  // valid inner outputs [lo3, hi3)
  std::int64_t offset3 = 0;       // input offset of inner output 0
  std::int64_t channel = 0;

  RowWalk(const ConvPlan& p, std::int64_t r) {
    std::int64_t kr = r % p.ker_plane;
    channel = (r / p.ker_plane) * p.in_plane;
    std::array<std::int64_t, kMaxAxes> k{};
    for (int a = kMaxAxes - 1; a >= 0; --a) {
      k[a] = kr % p.ker[a];
      kr /= p.ker[a];
    }
    for (int a = 0; a < kMaxAxes - 1; ++a) {
      index[a].resize(static_cast<std::size_t>(p.out[a]));
      for (std::int64_t o = 0; o < p.out[a]; ++o) {
        const std::int64_t i = o * p.str[a] - p.pad[a] + k[a];
        index[a][o] = (i < 0 || i >= p.ext[a]) ? -1 : i;
      }
    }
    // 0 <= o3*s - pad + k < ext
    lo3 = std::min(p.out[3], std::max<std::int64_t>(0, ceil_div(p.pad[3] - k[3], p.str[3])));
    hi3 = std::max(lo3, std::min<std::int64_t>(p.out[3], ceil_div(p.ext[3] + p.pad[3] - k[3], p.str[3])));
    offset3 = k[3] - p.pad[3];
  }
};

// Calls fn(col_offset, base) for every whole inner row of row `r` of the
// im2col matrix in columns [n0, n1); base is the input offset of the row's
// first element along the inner axis, or -1 when the row lies in padding.
// n0 and n1 are multiples of out[3].
template <typename Fn>
void for_each_inner_row(const ConvPlan& p, const RowWalk& w, std::int64_t n0, std::int64_t n1, Fn&& fn) {
  std::int64_t m = n0 / p.out[3];
  std::array<std::int64_t, 3> o{};
  for (int a = 2; a >= 0; --a) {
    o[a] = m % p.out[a];
    m /= p.out[a];
  }
  for (std::int64_t col = 0; col < n1 - n0; col += p.out[3]) {
    const std::int64_t i0 = w.index[0][o[0]], i1 = w.index[1][o[1]], i2 = w.index[2][o[2]];
    if (i0 < 0 || i1 < 0 || i2 < 0) {
      fn(col, std::int64_t{-1});
    } else {
      fn(col, w.channel + ((i0 * p.ext[1] + i1) * p.ext[2] + i2) * p.ext[3]);
    }
    if (++o[2] == p.out[2]) {
      o[2] = 0;
      if (++o[1] == p.out[1]) {
        o[1] = 0;
        ++o[0];
      }
    }
  }
}

template <typename T>
void im2col(const ConvPlan& p, const T* in, std::int64_t n0, std::int64_t n1, T* col) {
  const std::int64_t nb = n1 - n0, len = p.out[3], s3 = p.str[3];
  for (std::int64_t r = 0; r < p.rows; ++r) {
    const RowWalk w(p, r);
    T* dst = col + r * nb;
    for_each_inner_row(p, w, n0, n1, [&](std::int64_t c, std::int64_t base) {
      T* d = dst + c;
      if (base < 0) {
        std::fill_n(d, len, T(0));
        return;
      }
      const T* src = in + base + w.offset3;
      std::fill_n(d, w.lo3, T(0));
      if (s3 == 1) {
        std::copy(src + w.lo3, src + w.hi3, d + w.lo3);
      } else {
        for (std::int64_t j = w.lo3; j < w.hi3; ++j) d[j] = src[j * s3];
      }
      std::fill(d + w.hi3, d + len, T(0));
    });
  }
}

template <typename T>
void col2im(const ConvPlan& p, const T* col, std::int64_t n0, std::int64_t n1, T* in_grad) {
  const std::int64_t nb = n1 - n0, s3 = p.str[3];
  for (std::int64_t r = 0; r < p.rows; ++r) {
    const RowWalk w(p, r);
    const T* src_row = col + r * nb;
    for_each_inner_row(p, w, n0, n1, [&](std::int64_t c, std::int64_t base) {
      if (base < 0) return;
      const T* g = src_row + c;
      T* dst = in_grad + base + w.offset3;
      if (s3 == 1) {
        for (std::int64_t j = w.lo3; j < w.hi3; ++j) dst[j] += g[j];
      } else {
        for (std::int64_t j = w.lo3; j < w.hi3; ++j) dst[j * s3] += g[j];
      }
    });
  }
}

// Whole inner rows per chunk, bounded by kColumnBudget entries.
std::int64_t chunk_columns(const ConvPlan& p) {
  const std::int64_t inner_rows = std::max<std::int64_t>(1, kColumnBudget / std::max<std::int64_t>(1, p.rows * p.out[3]));
  return std::min(p.out_plane, inner_rows * p.out[3]);
}

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapC = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using MapM = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;

}  // namespace

template <typename T>
Tensor<T> convnd(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                 std::span<const int> stride, std::span<const int> pad) {
  const ConvPlan p = make_plan(input, kernel, bias, stride, pad);
  Tensor<T> out(p.out_shape);

  const T* in = input.data().data();
  const T* w = kernel.data().data();
  T* o = out.data_mut().data();
  const std::int64_t n_total = p.out_plane;
  MapC<T> weights(w, p.c_out, p.rows, Eigen::OuterStride<>(p.rows));

  if (p.pointwise) {
    MapC<T> src(in, p.rows, n_total, Eigen::OuterStride<>(n_total));
    MapM<T> dst(o, p.c_out, n_total, Eigen::OuterStride<>(n_total));
    dst.noalias() = weights * src;
  } else {
    const std::int64_t chunk = chunk_columns(p);
    std::vector<T> col(static_cast<std::size_t>(p.rows * chunk));
    for (std::int64_t n0 = 0; n0 < n_total; n0 += chunk) {
      const std::int64_t n1 = std::min(n_total, n0 + chunk);
      const std::int64_t nb = n1 - n0;
      im2col(p, in, n0, n1, col.data());
      MapC<T> src(col.data(), p.rows, nb, Eigen::OuterStride<>(nb));
      MapM<T> dst(o + n0, p.c_out, nb, Eigen::OuterStride<>(n_total));
      dst.noalias() = weights * src;
    }
  }
  const auto b = bias.data();
  for (std::int64_t co = 0; co < p.c_out; ++co) {
    T* row = o + co * n_total;
    const T bv = b[co];
    for (std::int64_t n = 0; n < n_total; ++n) row[n] += bv;
  }

  auto ii = input.impl();
  auto ki = kernel.impl();
  auto bi = bias.impl();
  detail::record_op(out, {&input, &kernel, &bias}, [p, ii, ki, bi](std::span<const T> g) {
    const std::int64_t n_total = p.out_plane;
    auto gb = detail::grad_sink(*bi);
    if (!gb.empty()) {
      for (std::int64_t co = 0; co < p.c_out; ++co) {
        T acc = 0;
        const T* row = g.data() + co * n_total;
        for (std::int64_t n = 0; n < n_total; ++n) acc += row[n];
        gb[co] += acc;
      }
    }
    auto gk = detail::grad_sink(*ki);
    auto gi = detail::grad_sink(*ii);
    if (gk.empty() && gi.empty()) return;
    MapC<T> weights(ki->data.data(), p.c_out, p.rows, Eigen::OuterStride<>(p.rows));
    if (p.pointwise) {
      MapC<T> gout(g.data(), p.c_out, n_total, Eigen::OuterStride<>(n_total));
      if (!gk.empty()) {
        MapC<T> src(ii->data.data(), p.rows, n_total, Eigen::OuterStride<>(n_total));
        MapM<T> dw(gk.data(), p.c_out, p.rows, Eigen::OuterStride<>(p.rows));
        dw.noalias() += gout * src.transpose();
      }
      if (!gi.empty()) {
        MapM<T> dx(gi.data(), p.rows, n_total, Eigen::OuterStride<>(n_total));
        dx.noalias() += weights.transpose() * gout;
      }
      return;
    }
    const std::int64_t chunk = chunk_columns(p);
    std::vector<T> col(static_cast<std::size_t>(p.rows * chunk));
    std::vector<T> dcol;
    if (!gi.empty()) dcol.resize(col.size());
    for (std::int64_t n0 = 0; n0 < n_total; n0 += chunk) {
      const std::int64_t n1 = std::min(n_total, n0 + chunk);
      const std::int64_t nb = n1 - n0;
      MapC<T> gout(g.data() + n0, p.c_out, nb, Eigen::OuterStride<>(n_total));
      if (!gk.empty()) {
        im2col(p, ii->data.data(), n0, n1, col.data());
        MapC<T> src(col.data(), p.rows, nb, Eigen::OuterStride<>(nb));
        MapM<T> dw(gk.data(), p.c_out, p.rows, Eigen::OuterStride<>(p.rows));
        dw.noalias() += gout * src.transpose();
      }
      if (!gi.empty()) {
        MapM<T> dc(dcol.data(), p.rows, nb, Eigen::OuterStride<>(nb));
        dc.noalias() = weights.transpose() * gout;
        col2im(p, dcol.data(), n0, n1, gi.data());
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias, int stride,
                 int pad) {
  if (input.rank() != 3) throw DimensionError("conv2d: expected [C,H,W], got " + shape_string(input.shape()));
  if (kernel.rank() != 4 || kernel.dim(2) != kernel.dim(3) || kernel.dim(2) % 2 == 0) {
    throw DimensionError("conv2d: kernel must be [C_out,C_in,k,k] with odd k");
  }
  const std::array<int, 2> s{stride, stride};
  const std::array<int, 2> pd{pad, pad};
  return convnd(input, kernel, bias, s, pd);
}

template <typename T>
Tensor<T> conv3d(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias, int stride,
                 std::array<int, 3> pad) {
  if (input.rank() != 4) throw DimensionError("conv3d: expected [C,D,H,W], got " + shape_string(input.shape()));
  if (kernel.rank() != 5) throw DimensionError("conv3d: kernel must be [C_out,C_in,kd,kh,kw]");
  const std::array<int, 3> s{stride, stride, stride};
  return convnd(input, kernel, bias, s, pad);
}

#define LFSR_INSTANTIATE_CONV(T)                                                                   \
  template Tensor<T> convnd(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,                  \
                            std::span<const int>, std::span<const int>);                           \
  template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, int);       \
  template Tensor<T> conv3d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, std::array<int, 3>);

LFSR_INSTANTIATE_CONV(float)
LFSR_INSTANTIATE_CONV(double)

}  // namespace lfsr
