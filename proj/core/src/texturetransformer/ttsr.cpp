#include "lfsr/texturetransformer/ttsr.hpp"

#include <Eigen/Core>
#include <string>

#include "../detail/layers.hpp"
#include "lfsr/numcore/branch_trace.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"
#include "lfsr/numcore/random.hpp"
#include "lfsr/numcore/resample.hpp"

namespace lfsr::ttsr {
using detail::add_conv;
using detail::conv_layer;

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
Tensor<T> normalized_patches(const Tensor<T>& feat) {
  return normalize_rows(unfold_patches(feat, kLv3Patch), T(1e-12));
}

// [N_q,D] x [N_k,D]^T of row-normalised patch matrices.
template <typename T>
Tensor<T> cosine_matrix(const Tensor<T>& qn, const Tensor<T>& kn) {
  const auto nq = qn.dim(0), nk = kn.dim(0), d = qn.dim(1);
  Tensor<T> out(Shape{nq, nk});
  Eigen::Map<const RowMat<T>> q(qn.data().data(), nq, d);
  Eigen::Map<const RowMat<T>> k(kn.data().data(), nk, d);
  Eigen::Map<RowMat<T>> r(out.data_mut().data(), nq, nk);
  r.noalias() = q * k.transpose();
  return out;
}

template <typename T>
Tensor<T> residual_block(const Tensor<T>& x, const StageWeights<T>& w, const std::string& name) {
  auto y = relu(conv_layer(x, w, name + ".conv0"));
  y = conv_layer(y, w, name + ".conv1");
  return add(x, y);
}

}  // namespace

template <typename T>
StageWeights<T> init_weights(std::uint64_t seed) {
  Rng rng(seed);
  StageWeights<T> w("ttsr");
  add_conv(w, "extract.lv1.conv0", {kLv1Channels, 3, 3, 3}, rng);
  add_conv(w, "extract.lv1.conv1", {kLv1Channels, kLv1Channels, 3, 3}, rng);
  add_conv(w, "extract.lv2.conv0", {kLv2Channels, kLv1Channels, 3, 3}, rng);
  add_conv(w, "extract.lv2.conv1", {kLv2Channels, kLv2Channels, 3, 3}, rng);
  add_conv(w, "extract.lv3.conv0", {kLv3Channels, kLv2Channels, 3, 3}, rng);
  add_conv(w, "extract.lv3.conv1", {kLv3Channels, kLv3Channels, 3, 3}, rng);
  add_conv(w, "head", {kWidth, 3, 3, 3}, rng);
  for (int i = 0; i < kResidualBlocks; ++i) {
    add_conv(w, "body" + std::to_string(i) + ".conv0", {kWidth, kWidth, 3, 3}, rng);
    add_conv(w, "body" + std::to_string(i) + ".conv1", {kWidth, kWidth, 3, 3}, rng);
  }
  add_conv(w, "fuse3", {kWidth, kWidth + kLv3Channels, 3, 3}, rng);
  add_conv(w, "up2", {kWidth * 4, kWidth, 3, 3}, rng);
  add_conv(w, "fuse2", {kWidth, kWidth + kLv2Channels, 3, 3}, rng);
  add_conv(w, "csfi2", {kWidth, kWidth * 2, 1, 1}, rng);
  add_conv(w, "up1", {kWidth * 4, kWidth, 3, 3}, rng);
  add_conv(w, "fuse1", {kWidth, kWidth + kLv1Channels, 3, 3}, rng);
  add_conv(w, "csfi1", {kWidth, kWidth * 3, 1, 1}, rng);
  add_conv(w, "tail", {3, kWidth, 3, 3}, rng, /*zero=*/true);
  return w;
}

template <typename T>
TextureFeatures<T> extract_texture_features(const Tensor<T>& image, const StageWeights<T>& w) {
  if (image.rank() != 3 || image.dim(0) != 3) {
    throw DimensionError("extract_texture_features: expected [3,H,W], got " + shape_string(image.shape()));
  }
  if (image.dim(1) % 4 != 0 || image.dim(2) % 4 != 0) {
    throw DimensionError("extract_texture_features: extents " + shape_string(image.shape()) +
                         " not divisible by 4");
  }
  TextureFeatures<T> f;
  f.lv1 = relu(conv_layer(relu(conv_layer(image, w, "extract.lv1.conv0")), w, "extract.lv1.conv1"));
  f.lv2 = relu(conv_layer(relu(conv_layer(f.lv1, w, "extract.lv2.conv0", 2)), w, "extract.lv2.conv1"));
  f.lv3 = relu(conv_layer(relu(conv_layer(f.lv2, w, "extract.lv3.conv0", 2)), w, "extract.lv3.conv1"));
  return f;
}

template <typename T>
Tensor<T> relevance_embedding(const Tensor<T>& q_feat, const Tensor<T>& k_feat) {
  if (q_feat.rank() != 3 || k_feat.rank() != 3 || q_feat.dim(0) != k_feat.dim(0)) {
    throw DimensionError("relevance_embedding: channel mismatch " + shape_string(q_feat.shape()) + " vs " +
                         shape_string(k_feat.shape()));
  }
  const auto qn = normalized_patches(q_feat);
  const auto kn = normalized_patches(k_feat);
  return cosine_matrix(qn, kn);
}

template <typename T>
std::vector<std::int64_t> hard_attention(const Tensor<T>& relevance) {
  if (!relevance.defined() || relevance.rank() != 2) throw ArgumentError("hard_attention: empty relevance");
  const auto nq = relevance.dim(0), nk = relevance.dim(1);
  auto r = relevance.data();
  std::vector<std::int64_t> index(static_cast<std::size_t>(nq), 0);
  for (std::int64_t i = 0; i < nq; ++i) {
    const T* row = r.data() + i * nk;
    std::int64_t best = 0;
    for (std::int64_t j = 1; j < nk; ++j)
      if (row[j] > row[best]) best = j;
    index[i] = best;
  }
  if (auto* trace = BranchTrace::active()) {
    for (auto i : index) trace->mix(static_cast<std::uint64_t>(i));
  }
  return index;
}

template <typename T>
Tensor<T> soft_attention(const Tensor<T>& relevance) {
  const auto index = hard_attention(relevance);
  const auto nk = relevance.dim(1);
  Tensor<T> out(Shape{static_cast<std::int64_t>(index.size())});
  auto o = out.data_mut();
  for (std::size_t i = 0; i < index.size(); ++i) o[i] = relevance.data()[static_cast<std::int64_t>(i) * nk + index[i]];
  return out;
}

template <typename T>
AttentionMaps<T> attend(const Tensor<T>& q_feat, const Tensor<T>& k_feat) {
  if (q_feat.rank() != 3 || k_feat.rank() != 3 || q_feat.dim(0) != k_feat.dim(0)) {
    throw DimensionError("attend: channel mismatch " + shape_string(q_feat.shape()) + " vs " +
                         shape_string(k_feat.shape()));
  }
  const auto qn = normalized_patches(q_feat);
  const auto kn = normalized_patches(k_feat);
  AttentionMaps<T> maps;
  maps.index_map = hard_attention(cosine_matrix(qn, kn));
  maps.soft_map = row_dot(qn, gather_rows(kn, maps.index_map));
  return maps;
}

template <typename T>
TextureFeatures<T> transfer_textures(const TextureFeatures<T>& v, const std::vector<std::int64_t>& index_map) {
  auto transfer = [&](const Tensor<T>& feat, PatchGeometry g) {
    auto patches = unfold_patches(feat, g);
    if (static_cast<std::int64_t>(index_map.size()) != patches.dim(0)) {
      throw StateError("transfer_textures: index map has " + std::to_string(index_map.size()) +
                       " entries, level has " + std::to_string(patches.dim(0)) + " patch positions");
    }
    return fold_patches(gather_rows(patches, index_map), g, feat.dim(1), feat.dim(2));
  };
  return TextureFeatures<T>{transfer(v.lv1, kLv1Patch), transfer(v.lv2, kLv2Patch), transfer(v.lv3, kLv3Patch)};
}

template <typename T>
ReferenceTextures<T> prepare_reference(const Tensor<T>& reference, const StageWeights<T>& w) {
  if (reference.rank() != 3 || reference.dim(0) != 3 || reference.dim(1) % kUpscale != 0 ||
      reference.dim(2) % kUpscale != 0) {
    throw ArgumentError("ttsr: reference must be [3,H,W] with H and W multiples of 4, got " +
                        shape_string(reference.shape()));
  }
  const auto key_image = bicubic_resize(bicubic_resize(reference, Scale{1, kUpscale}), Scale{kUpscale, 1});
  return {extract_texture_features(key_image, w).lv3, extract_texture_features(reference, w)};
}

template <typename T>
Tensor<T> forward(const Tensor<T>& lr_view, const Tensor<T>& reference, const StageWeights<T>& w) {
  return forward(lr_view, prepare_reference(reference, w), w);
}

template <typename T>
Tensor<T> forward(const Tensor<T>& lr_view, const ReferenceTextures<T>& ref, const StageWeights<T>& w) {
  const auto& v = ref.value;
  if (lr_view.rank() != 3 || lr_view.dim(0) != 3 || v.lv1.dim(1) != kUpscale * lr_view.dim(1) ||
      v.lv1.dim(2) != kUpscale * lr_view.dim(2)) {
    throw ArgumentError("ttsr: reference [3," + std::to_string(v.lv1.dim(1)) + "," + std::to_string(v.lv1.dim(2)) +
                        "] is not 4x the view " + shape_string(lr_view.shape()));
  }
  const std::int64_t h = lr_view.dim(1), wd = lr_view.dim(2);

  const auto upscaled = bicubic_resize(lr_view, Scale{kUpscale, 1});
  const auto q = extract_texture_features(upscaled, w);

  const auto maps = attend(q.lv3, ref.key_lv3);
  const auto t = transfer_textures(v, maps.index_map);
  const auto s3 = reshape(maps.soft_map, Shape{1, h, wd});
  const auto s2 = upsample_nearest(s3, 2);
  const auto s1 = upsample_nearest(s3, 4);

  auto f3 = relu(conv_layer(lr_view, w, "head"));
  for (int i = 0; i < kResidualBlocks; ++i) f3 = residual_block(f3, w, "body" + std::to_string(i));
  f3 = add(f3, mul_broadcast(relu(conv_layer(concat<T>({f3, t.lv3}), w, "fuse3")), s3));

  const auto u2 = relu(pixel_shuffle(conv_layer(f3, w, "up2"), 2));
  auto f2 = add(u2, mul_broadcast(relu(conv_layer(concat<T>({u2, t.lv2}), w, "fuse2")), s2));
  f2 = add(f2, conv_layer(concat<T>({f2, upsample_nearest(f3, 2)}), w, "csfi2"));

  const auto u1 = relu(pixel_shuffle(conv_layer(f2, w, "up1"), 2));
  auto f1 = add(u1, mul_broadcast(relu(conv_layer(concat<T>({u1, t.lv1}), w, "fuse1")), s1));
  f1 = add(f1, conv_layer(concat<T>({f1, upsample_nearest(f2, 2), upsample_nearest(f3, 4)}), w, "csfi1"));

  const auto residual = conv_layer(f1, w, "tail");
  return clamp(add(upscaled, residual), T(0), T(1));
}

#define LFSR_INSTANTIATE_TTSR(T)                                                                          \
  template StageWeights<T> init_weights<T>(std::uint64_t);                                                 \
  template TextureFeatures<T> extract_texture_features(const Tensor<T>&, const StageWeights<T>&);          \
  template Tensor<T> relevance_embedding(const Tensor<T>&, const Tensor<T>&);                              \
  template std::vector<std::int64_t> hard_attention(const Tensor<T>&);                                     \
  template Tensor<T> soft_attention(const Tensor<T>&);                                                     \
  template AttentionMaps<T> attend(const Tensor<T>&, const Tensor<T>&);                                    \
  template TextureFeatures<T> transfer_textures(const TextureFeatures<T>&, const std::vector<std::int64_t>&); \
  template ReferenceTextures<T> prepare_reference(const Tensor<T>&, const StageWeights<T>&);                 \
  template Tensor<T> forward(const Tensor<T>&, const Tensor<T>&, const StageWeights<T>&);                  \
  template Tensor<T> forward(const Tensor<T>&, const ReferenceTextures<T>&, const StageWeights<T>&);

LFSR_INSTANTIATE_TTSR(float)
LFSR_INSTANTIATE_TTSR(double)

}  // namespace lfsr::ttsr
