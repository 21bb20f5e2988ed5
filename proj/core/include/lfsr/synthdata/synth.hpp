#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "lfsr/lightfield/lightfield.hpp"

namespace lfsr::synth {

enum class TextureKind { kCheckerboard, kSmoothNoise, kGradient };

// Axis-aligned rectangle in texture (central-view) pixel coordinates,
// half-open: [x0, x1) x [y0, y1).
struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct Layer {
  TextureKind texture = TextureKind::kSmoothNoise;
  std::uint64_t texture_seed = 0;
  double disparity = 0.0;     // pixels per view step, |d| <= 3
  std::optional<Rect> region;  // nullopt covers the whole frame
};

// Layers are ordered back to front; later layers occlude earlier ones.
struct SceneSpec {
  std::vector<Layer> layers;
  int u = 7, v = 7, h = 128, w = 128;
  std::uint64_t seed = 0;
};

inline constexpr double kMaxDisparity = 3.0;

// View (u,v) samples every layer at (x + d*(u - uc), y + d*(v - vc)) with the
// Keys bicubic stencil and composites front over back.
LightField synthesize_lf(const SceneSpec& spec);

struct Geometry {
  int u = 7, v = 7, h = 128, w = 128;
};

struct ScenePair {
  LightField hr;
  LightField lr;  // degrade_lf(hr, 4)
};

// Random scene spec drawn from the dataset distribution.
SceneSpec random_scene(const Geometry& geometry, std::uint64_t seed);

std::vector<ScenePair> make_dataset(int n_scenes, const Geometry& geometry, std::uint64_t seed);

// scene_{k}/hr and scene_{k}/lr PNG view directories.
void save_dataset(const std::vector<ScenePair>& dataset, const std::filesystem::path& root);
std::vector<ScenePair> load_dataset(const std::filesystem::path& root);

}  // namespace lfsr::synth
