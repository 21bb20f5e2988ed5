#pragma once

#include <cstdint>
#include <vector>

#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/patches.hpp"
#include "lfsr/numcore/tensor.hpp"

// Reference-based single-view super-resolution by texture transfer.
namespace lfsr::ttsr {

inline constexpr int kWidth = 32;
inline constexpr int kResidualBlocks = 8;
inline constexpr int kUpscale = 4;
inline constexpr int kLv1Channels = 16;
inline constexpr int kLv2Channels = 32;
inline constexpr int kLv3Channels = 64;

// Extractor output at full, 1/2 and 1/4 of the input resolution.
template <typename T>
struct TextureFeatures {
  Tensor<T> lv1;  // [16,H,W]
  Tensor<T> lv2;  // [32,H/2,W/2]
  Tensor<T> lv3;  // [64,H/4,W/4]
};

// Hard index map (best key patch per query patch) and soft relevance map
// (that patch's cosine similarity) over lv3 patch positions.
template <typename T>
struct AttentionMaps {
  std::vector<std::int64_t> index_map;
  Tensor<T> soft_map;  // [N_q]
};

// Patch geometry of the transfer at each level; all three enumerate the
// same lv3 position grid.
inline constexpr PatchGeometry kLv3Patch{3, 1, 1};
inline constexpr PatchGeometry kLv2Patch{6, 2, 2};
inline constexpr PatchGeometry kLv1Patch{12, 4, 4};

template <typename T>
StageWeights<T> init_weights(std::uint64_t seed);

// Shared learnable encoder applied to query, key and value images.
template <typename T>
TextureFeatures<T> extract_texture_features(const Tensor<T>& image, const StageWeights<T>& weights);

// r(i,j) = <p_i/|p_i|, k_j/|k_j|> over 3x3 patches (stride 1, pad 1) of
// two lv3 feature maps. Not recorded for differentiation.
template <typename T>
Tensor<T> relevance_embedding(const Tensor<T>& q_feat, const Tensor<T>& k_feat);

// Row-wise argmax, ties to the smallest index.
template <typename T>
std::vector<std::int64_t> hard_attention(const Tensor<T>& relevance);
// Row-wise maximum.
template <typename T>
Tensor<T> soft_attention(const Tensor<T>& relevance);

// Both maps from lv3 features. The index map is a constant; the soft map is
// recorded for differentiation through the selected patch pairs.
template <typename T>
AttentionMaps<T> attend(const Tensor<T>& q_feat, const Tensor<T>& k_feat);

// Gathers value patches at `index_map` on every level and folds them back
// with overlap averaging.
template <typename T>
TextureFeatures<T> transfer_textures(const TextureFeatures<T>& v_feat, const std::vector<std::int64_t>& index_map);

// [3,h,w] low-resolution view and [3,4h,4w] reference to a [3,4h,4w] view,
//   clamp(bicubic_x4(lr_view) + residual, 0, 1).
template <typename T>
Tensor<T> forward(const Tensor<T>& lr_view, const Tensor<T>& reference, const StageWeights<T>& weights);

// Key and value features of one reference, reusable across every view
// that is super-resolved against it.
template <typename T>
struct ReferenceTextures {
  Tensor<T> key_lv3;
  TextureFeatures<T> value;
};

template <typename T>
ReferenceTextures<T> prepare_reference(const Tensor<T>& reference, const StageWeights<T>& weights);

template <typename T>
Tensor<T> forward(const Tensor<T>& lr_view, const ReferenceTextures<T>& reference, const StageWeights<T>& weights);

}  // namespace lfsr::ttsr
