#include "lfsr/numcore/ops.hpp"

#include <algorithm>
#include <cmath>

#include "lfsr/numcore/branch_trace.hpp"
#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
}

template <typename T>
using ImplPtr = std::shared_ptr<detail::TensorImpl<T>>;

}  // namespace

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "add");
  Tensor<T> out(a.shape());
  auto o = out.data_mut();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] + y[i];
  ImplPtr<T> ai = a.impl(), bi = b.impl();
  detail::record_op(out, {&a, &b}, [ai, bi](std::span<const T> g) {
    for (auto* t : {ai.get(), bi.get()}) {
      auto s = detail::grad_sink(*t);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += g[i];
    }
  });
  return out;
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "sub");
  Tensor<T> out(a.shape());
  auto o = out.data_mut();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
  ImplPtr<T> ai = a.impl(), bi = b.impl();
  detail::record_op(out, {&a, &b}, [ai, bi](std::span<const T> g) {
    auto sa = detail::grad_sink(*ai);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] += g[i];
    auto sb = detail::grad_sink(*bi);
    for (std::size_t i = 0; i < sb.size(); ++i) sb[i] -= g[i];
  });
  return out;
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "mul");
  Tensor<T> out(a.shape());
  auto o = out.data_mut();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  ImplPtr<T> ai = a.impl(), bi = b.impl();
  detail::record_op(out, {&a, &b}, [ai, bi](std::span<const T> g) {
    auto sa = detail::grad_sink(*ai);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] += g[i] * bi->data[i];
    auto sb = detail::grad_sink(*bi);
    for (std::size_t i = 0; i < sb.size(); ++i) sb[i] += g[i] * ai->data[i];
  });
  return out;
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor) {
  Tensor<T> out(a.shape());
  auto o = out.data_mut();
  auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * factor;
  ImplPtr<T> ai = a.impl();
  detail::record_op(out, {&a}, [ai, factor](std::span<const T> g) {
    auto s = detail::grad_sink(*ai);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += g[i] * factor;
  });
  return out;
}

template <typename T>
Tensor<T> mul_broadcast(const Tensor<T>& x, const Tensor<T>& s) {
  if (x.rank() != s.rank() || s.dim(0) != 1 ||
      !std::equal(x.shape().begin() + 1, x.shape().end(), s.shape().begin() + 1)) {
    throw DimensionError("mul_broadcast: cannot broadcast " + shape_string(s.shape()) + " over " +
                         shape_string(x.shape()));
  }
  const auto channels = x.dim(0);
  const auto plane = s.numel();
  Tensor<T> out(x.shape());
  auto o = out.data_mut();
  auto xd = x.data();
  auto sd = s.data();
  for (std::int64_t c = 0; c < channels; ++c) {
    for (std::int64_t i = 0; i < plane; ++i) o[c * plane + i] = xd[c * plane + i] * sd[i];
  }
  ImplPtr<T> xi = x.impl(), si = s.impl();
  detail::record_op(out, {&x, &s}, [xi, si, channels, plane](std::span<const T> g) {
    auto gx = detail::grad_sink(*xi);
    if (!gx.empty()) {
      for (std::int64_t c = 0; c < channels; ++c)
        for (std::int64_t i = 0; i < plane; ++i) gx[c * plane + i] += g[c * plane + i] * si->data[i];
    }
    auto gs = detail::grad_sink(*si);
    if (!gs.empty()) {
      for (std::int64_t c = 0; c < channels; ++c)
        for (std::int64_t i = 0; i < plane; ++i) gs[i] += g[c * plane + i] * xi->data[c * plane + i];
    }
  });
  return out;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> out(x.shape());
  auto o = out.data_mut();
  auto xd = x.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = xd[i] > T(0) ? xd[i] : T(0);
  if (auto* trace = BranchTrace::active()) {
    detail::BranchMixer mixer(trace);
    for (T v : xd) mixer.push(v > T(0));
  }
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (xi->data[i] > T(0)) s[i] += g[i];
  });
  return out;
}

template <typename T>
Tensor<T> clamp(const Tensor<T>& x, T lo, T hi) {
  Tensor<T> out(x.shape());
  auto o = out.data_mut();
  auto xd = x.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::min(std::max(xd[i], lo), hi);
  if (auto* trace = BranchTrace::active()) {
    detail::BranchMixer mixer(trace);
    for (T v : xd) {
      mixer.push(v < lo);
      mixer.push(v > hi);
    }
  }
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi, lo, hi](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const T v = xi->data[i];
      if (v >= lo && v <= hi) s[i] += g[i];
    }
  });
  return out;
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
  T acc = 0;
  for (T v : x.data()) acc += v;
  Tensor<T> out = Tensor<T>::scalar(acc);
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    for (auto& v : s) v += g[0];
  });
  return out;
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x) {
  T acc = 0;
  for (T v : x.data()) acc += v;
  const T n = static_cast<T>(x.numel());
  Tensor<T> out = Tensor<T>::scalar(acc / n);
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi, n](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    for (auto& v : s) v += g[0] / n;
  });
  return out;
}

template <typename T>
Tensor<T> dot(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.numel() != b.numel()) {
    throw DimensionError("dot: size mismatch " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
  T acc = 0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  Tensor<T> out = Tensor<T>::scalar(acc);
  ImplPtr<T> ai = a.impl(), bi = b.impl();
  detail::record_op(out, {&a, &b}, [ai, bi](std::span<const T> g) {
    auto sa = detail::grad_sink(*ai);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] += g[0] * bi->data[i];
    auto sb = detail::grad_sink(*bi);
    for (std::size_t i = 0; i < sb.size(); ++i) sb[i] += g[0] * ai->data[i];
  });
  return out;
}

template <typename T>
Tensor<T> mean_abs(const Tensor<T>& x) {
  T acc = 0;
  for (T v : x.data()) acc += std::abs(v);
  if (auto* trace = BranchTrace::active()) {
    detail::BranchMixer mixer(trace);
    for (T v : x.data()) mixer.push(v > T(0));
  }
  const T n = static_cast<T>(x.numel());
  Tensor<T> out = Tensor<T>::scalar(acc / n);
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi, n](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    const T step = g[0] / n;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const T v = xi->data[i];
      if (v > T(0)) s[i] += step;
      else if (v < T(0)) s[i] -= step;
    }
  });
  return out;
}

template <typename T>
Tensor<T> l1_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  return mean_abs(sub(pred, target));
}

template <typename T>
Tensor<T> forward_difference(const Tensor<T>& x, std::size_t axis) {
  if (axis >= x.rank()) throw ArgumentError("forward_difference: axis out of range");
  const auto extent = x.dim(axis);
  if (extent < 2) throw DimensionError("forward_difference: axis extent must be at least 2");
  std::int64_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= x.dim(a);
  for (std::size_t a = axis + 1; a < x.rank(); ++a) inner *= x.dim(a);
  Shape shape = x.shape();
  shape[axis] = extent - 1;
  Tensor<T> out(shape);
  auto o = out.data_mut();
  auto xd = x.data();
  for (std::int64_t p = 0; p < outer; ++p) {
    for (std::int64_t i = 0; i + 1 < extent; ++i) {
      const T* lo = xd.data() + (p * extent + i) * inner;
      const T* hi = lo + inner;
      T* dst = o.data() + (p * (extent - 1) + i) * inner;
      for (std::int64_t j = 0; j < inner; ++j) dst[j] = hi[j] - lo[j];
    }
  }
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi, outer, extent, inner](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    if (s.empty()) return;
    for (std::int64_t p = 0; p < outer; ++p) {
      for (std::int64_t i = 0; i + 1 < extent; ++i) {
        const T* gi = g.data() + (p * (extent - 1) + i) * inner;
        T* lo = s.data() + (p * extent + i) * inner;
        T* hi = lo + inner;
        for (std::int64_t j = 0; j < inner; ++j) {
          hi[j] += gi[j];
          lo[j] -= gi[j];
        }
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw DimensionError("reshape: " + shape_string(x.shape()) + " -> " + shape_string(shape));
  }
  Tensor<T> out(std::move(shape), std::vector<T>(x.data().begin(), x.data().end()));
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += g[i];
  });
  return out;
}

template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw ArgumentError("concat: no inputs");
  Shape shape = parts.front().shape();
  shape[0] = 0;
  for (const auto& p : parts) {
    if (p.rank() != shape.size() ||
        !std::equal(p.shape().begin() + 1, p.shape().end(), shape.begin() + 1)) {
      throw DimensionError("concat: trailing extents differ: " + shape_string(p.shape()));
    }
    shape[0] += p.dim(0);
  }
  std::vector<T> values;
  values.reserve(static_cast<std::size_t>(shape_numel(shape)));
  std::vector<ImplPtr<T>> impls;
  for (const auto& p : parts) {
    values.insert(values.end(), p.data().begin(), p.data().end());
    impls.push_back(p.impl());
  }
  Tensor<T> out(std::move(shape), std::move(values));
  detail::record_op(out, parts, [impls](std::span<const T> g) {
    std::size_t offset = 0;
    for (const auto& impl : impls) {
      auto s = detail::grad_sink(*impl);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += g[offset + i];
      offset += impl->data.size();
    }
  });
  return out;
}

template <typename T>
Tensor<T> upsample_nearest(const Tensor<T>& x, int factor) {
  if (x.rank() != 3) throw DimensionError("upsample_nearest: expected [C,H,W]");
  if (factor < 1) throw ArgumentError("upsample_nearest: factor must be >= 1");
  const auto c = x.dim(0), h = x.dim(1), w = x.dim(2);
  const std::int64_t oh = h * factor, ow = w * factor;
  Tensor<T> out(Shape{c, oh, ow});
  auto o = out.data_mut();
  auto xd = x.data();
  for (std::int64_t ch = 0; ch < c; ++ch)
    for (std::int64_t y = 0; y < oh; ++y)
      for (std::int64_t xx = 0; xx < ow; ++xx)
        o[(ch * oh + y) * ow + xx] = xd[(ch * h + y / factor) * w + xx / factor];
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi, c, h, w, factor, oh, ow](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    if (s.empty()) return;
    for (std::int64_t ch = 0; ch < c; ++ch)
      for (std::int64_t y = 0; y < oh; ++y)
        for (std::int64_t xx = 0; xx < ow; ++xx)
          s[(ch * h + y / factor) * w + xx / factor] += g[(ch * oh + y) * ow + xx];
  });
  return out;
}

template <typename T>
Tensor<T> gather_rows(const Tensor<T>& x, std::span<const std::int64_t> index) {
  if (x.rank() != 2) throw DimensionError("gather_rows: expected [N,D]");
  const auto n = x.dim(0), d = x.dim(1);
  for (auto i : index) {
    if (i < 0 || i >= n) {
      throw StateError("gather_rows: index " + std::to_string(i) + " outside [0," +
                       std::to_string(n) + ")");
    }
  }
  const auto m = static_cast<std::int64_t>(index.size());
  if (m == 0) throw ArgumentError("gather_rows: empty index");
  Tensor<T> out(Shape{m, d});
  auto o = out.data_mut();
  auto xd = x.data();
  for (std::int64_t r = 0; r < m; ++r)
    std::copy_n(xd.data() + index[r] * d, d, o.data() + r * d);
  ImplPtr<T> xi = x.impl();
  std::vector<std::int64_t> idx(index.begin(), index.end());
  detail::record_op(out, {&x}, [xi, idx = std::move(idx), d](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    if (s.empty()) return;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      T* dst = s.data() + idx[r] * d;
      const T* src = g.data() + static_cast<std::int64_t>(r) * d;
      for (std::int64_t j = 0; j < d; ++j) dst[j] += src[j];
    }
  });
  return out;
}

template <typename T>
Tensor<T> normalize_rows(const Tensor<T>& x, T eps) {
  if (x.rank() != 2) throw DimensionError("normalize_rows: expected [N,D]");
  const auto n = x.dim(0), d = x.dim(1);
  Tensor<T> out(x.shape());
  auto o = out.data_mut();
  auto xd = x.data();
  std::vector<T> norms(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    T acc = 0;
    for (std::int64_t j = 0; j < d; ++j) acc += xd[r * d + j] * xd[r * d + j];
    const T norm = std::max(std::sqrt(acc), eps);
    norms[r] = norm;
    for (std::int64_t j = 0; j < d; ++j) o[r * d + j] = xd[r * d + j] / norm;
  }
  ImplPtr<T> xi = x.impl(), oi = out.impl();
  std::weak_ptr<detail::TensorImpl<T>> ow = oi;
  detail::record_op(out, {&x}, [xi, ow, norms = std::move(norms), n, d, eps](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    if (s.empty()) return;
    auto oi = ow.lock();
    for (std::int64_t r = 0; r < n; ++r) {
      const T norm = norms[r];
      const T* y = oi->data.data() + r * d;
      const T* gr = g.data() + r * d;
      T* dst = s.data() + r * d;
      if (norm > eps) {
        T yg = 0;
        for (std::int64_t j = 0; j < d; ++j) yg += y[j] * gr[j];
        for (std::int64_t j = 0; j < d; ++j) dst[j] += (gr[j] - y[j] * yg) / norm;
      } else {
        for (std::int64_t j = 0; j < d; ++j) dst[j] += gr[j] / norm;
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T> row_dot(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "row_dot");
  if (a.rank() != 2) throw DimensionError("row_dot: expected [N,D]");
  const auto n = a.dim(0), d = a.dim(1);
  Tensor<T> out(Shape{n});
  auto o = out.data_mut();
  auto x = a.data();
  auto y = b.data();
  for (std::int64_t r = 0; r < n; ++r) {
    T acc = 0;
    for (std::int64_t j = 0; j < d; ++j) acc += x[r * d + j] * y[r * d + j];
    o[r] = acc;
  }
  ImplPtr<T> ai = a.impl(), bi = b.impl();
  detail::record_op(out, {&a, &b}, [ai, bi, n, d](std::span<const T> g) {
    auto sa = detail::grad_sink(*ai);
    if (!sa.empty())
      for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t j = 0; j < d; ++j) sa[r * d + j] += g[r] * bi->data[r * d + j];
    auto sb = detail::grad_sink(*bi);
    if (!sb.empty())
      for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t j = 0; j < d; ++j) sb[r * d + j] += g[r] * ai->data[r * d + j];
  });
  return out;
}

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, int r) {
  if (x.rank() != 3) throw DimensionError("pixel_shuffle: expected [C,H,W]");
  if (r < 1) throw ArgumentError("pixel_shuffle: factor must be >= 1");
  const std::int64_t rr = static_cast<std::int64_t>(r) * r;
  if (x.dim(0) % rr != 0) {
    throw DimensionError("pixel_shuffle: " + std::to_string(x.dim(0)) +
                         " channels not divisible by " + std::to_string(rr));
  }
  const auto c = x.dim(0) / rr, h = x.dim(1), w = x.dim(2);
  const std::int64_t oh = h * r, ow = w * r;
  Tensor<T> out(Shape{c, oh, ow});
  auto o = out.data_mut();
  auto xd = x.data();
  // Source offset of every output element; shared by both directions.
  auto src_index = [=](std::int64_t ch, std::int64_t oy, std::int64_t ox) {
    const auto y = oy / r, dy = oy % r, xx = ox / r, dx = ox % r;
    return ((ch * rr + dy * r + dx) * h + y) * w + xx;
  };
  for (std::int64_t ch = 0; ch < c; ++ch)
    for (std::int64_t oy = 0; oy < oh; ++oy)
      for (std::int64_t ox = 0; ox < ow; ++ox) o[(ch * oh + oy) * ow + ox] = xd[src_index(ch, oy, ox)];
  ImplPtr<T> xi = x.impl();
  detail::record_op(out, {&x}, [xi, c, oh, ow, src_index](std::span<const T> g) {
    auto s = detail::grad_sink(*xi);
    if (s.empty()) return;
    for (std::int64_t ch = 0; ch < c; ++ch)
      for (std::int64_t oy = 0; oy < oh; ++oy)
        for (std::int64_t ox = 0; ox < ow; ++ox) s[src_index(ch, oy, ox)] += g[(ch * oh + oy) * ow + ox];
  });
  return out;
}

#define LFSR_INSTANTIATE_OPS(T)                                                              \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> sub(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> mul(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> scale(const Tensor<T>&, T);                                             \
  template Tensor<T> mul_broadcast(const Tensor<T>&, const Tensor<T>&);                      \
  template Tensor<T> relu(const Tensor<T>&);                                                 \
  template Tensor<T> clamp(const Tensor<T>&, T, T);                                          \
  template Tensor<T> sum(const Tensor<T>&);                                                  \
  template Tensor<T> mean(const Tensor<T>&);                                                 \
  template Tensor<T> dot(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> mean_abs(const Tensor<T>&);                                             \
  template Tensor<T> l1_loss(const Tensor<T>&, const Tensor<T>&);                            \
  template Tensor<T> forward_difference(const Tensor<T>&, std::size_t);                      \
  template Tensor<T> reshape(const Tensor<T>&, Shape);                                       \
  template Tensor<T> concat(const std::vector<Tensor<T>>&);                                  \
  template Tensor<T> upsample_nearest(const Tensor<T>&, int);                                \
  template Tensor<T> gather_rows(const Tensor<T>&, std::span<const std::int64_t>);           \
  template Tensor<T> normalize_rows(const Tensor<T>&, T);                                    \
  template Tensor<T> row_dot(const Tensor<T>&, const Tensor<T>&);                            \
  template Tensor<T> pixel_shuffle(const Tensor<T>&, int);

LFSR_INSTANTIATE_OPS(float)
LFSR_INSTANTIATE_OPS(double)

}  // namespace lfsr
