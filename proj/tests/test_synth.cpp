#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "lfsr/lightfield/epi.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/synthdata/synth.hpp"

namespace fs = std::filesystem;

namespace lfsr::synth {
namespace {

SceneSpec single_layer(double d, TextureKind kind = TextureKind::kSmoothNoise, int n = 7, int size = 32) {
  SceneSpec spec;
  spec.u = spec.v = n;
  spec.h = spec.w = size;
  spec.layers.push_back(Layer{kind, 1234, d, std::nullopt});
  return spec;
}

// Largest |view(u,v)(y,x) - view(u+k,v)(y,x-k*d)| over interior pixels.
double max_shift_error(const LightField& lf, double d, int k) {
  const auto& e = lf.extent();
  const int shift = static_cast<int>(std::lround(k * d));
  const int border = std::abs(shift) + 1;
  double worst = 0;
  for (int u = 0; u + k < e.u; ++u)
    for (int v = 0; v < e.v; ++v)
      for (int y = 0; y < e.h; ++y)
        for (int x = border; x < e.w - border; ++x)
          for (int c = 0; c < 3; ++c)
            worst = std::max(worst, double(std::abs(lf.at(u, v, y, x, c) - lf.at(u + k, v, y, x - shift, c))));
  return worst;
}

TEST(SynthTest, ZeroDisparityViewsAreBitIdentical) {
  auto lf = synthesize_lf(single_layer(0.0));
  const auto n = static_cast<std::size_t>(32 * 32 * 3);
  for (int k = 1; k < 49; ++k) {
    EXPECT_TRUE(std::equal(lf.values().begin(), lf.values().begin() + n, lf.values().begin() + k * n));
  }
}

TEST(SynthTest, IntegerDisparityIsAnExactTranslation) {
  for (double d : {1.0, 2.0, -1.0}) {
    auto lf = synthesize_lf(single_layer(d));
    EXPECT_EQ(max_shift_error(lf, d, 1), 0.0) << d;
    // Vertical parallax follows v with the same sign.
    const auto& e = lf.extent();
    for (int v = 0; v + 1 < e.v; ++v)
      for (int y = 3; y < e.h - 3; ++y)
        for (int x = 0; x < e.w; ++x)
          ASSERT_EQ(lf.at(2, v, y, x, 0), lf.at(2, v + 1, y - static_cast<int>(d), x, 0));
  }
}

TEST(SynthTest, ViewsAreTranslatedCentralViews) {
  const double d = 1.0;
  auto lf = synthesize_lf(single_layer(d, TextureKind::kCheckerboard));
  for (int u = 0; u < 7; ++u)
    for (int v = 0; v < 7; ++v)
      for (int y = 10; y < 22; ++y)
        for (int x = 10; x < 22; ++x)
          ASSERT_EQ(lf.at(u, v, y, x, 1), lf.at(3, 3, y + (v - 3), x + (u - 3), 1));
}

TEST(SynthTest, HalfPixelDisparitiesTranslateByWholePixelsOverTwoViews) {
  for (double d : {0.5, 1.5}) {
    auto lf = synthesize_lf(single_layer(d));
    EXPECT_LE(max_shift_error(lf, d, 2), 1e-6) << d;
  }
}

TEST(SynthTest, EpiLinesFollowTheDisparity) {
  auto lf = synthesize_lf(single_layer(2.0));
  auto epi = epi_extract(lf, EpiOrientation::kHorizontal, 3, 16);
  const int W = 32;
  for (int u = 0; u + 1 < 7; ++u)
    for (int x = 3; x < W - 3; ++x)
      for (int c = 0; c < 3; ++c)
        EXPECT_EQ(epi.image.data()[(u * W + x) * 3 + c], epi.image.data()[((u + 1) * W + x - 2) * 3 + c]);
}

TEST(SynthTest, FrontLayerOccludesBackLayer) {
  SceneSpec spec = single_layer(0.0, TextureKind::kGradient);
  spec.layers.push_back(Layer{TextureKind::kCheckerboard, 99, 1.0, Rect{8, 8, 20, 20}});
  auto lf = synthesize_lf(spec);
  auto back = synthesize_lf(single_layer(0.0, TextureKind::kGradient));
  // Central view: inside the rectangle differs from the background, outside matches it.
  int inside_diff = 0;
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      const bool inside = x >= 8 && x < 20 && y >= 8 && y < 20;
      const bool same = lf.at(3, 3, y, x, 0) == back.at(3, 3, y, x, 0) && lf.at(3, 3, y, x, 1) == back.at(3, 3, y, x, 1);
      if (!inside) EXPECT_TRUE(same);
      inside_diff += inside && !same;
    }
  EXPECT_GT(inside_diff, 0);
  // The rectangle moves with its own disparity in view (4,3): x in [7,19).
  for (int x = 0; x < 32; ++x) {
    const bool inside = x >= 7 && x < 19;
    if (!inside) {
      EXPECT_EQ(lf.at(4, 3, 12, x, 2), back.at(4, 3, 12, x, 2)) << x;
    }
  }
}

TEST(SynthTest, ValidationErrors) {
  SceneSpec empty;
  EXPECT_THROW(synthesize_lf(empty), ArgumentError);
  EXPECT_THROW(synthesize_lf(single_layer(3.5)), ArgumentError);
  SceneSpec partial;
  partial.layers.push_back(Layer{TextureKind::kGradient, 1, 0.0, Rect{0, 0, 4, 4}});
  EXPECT_THROW(synthesize_lf(partial), ArgumentError);
  EXPECT_THROW(make_dataset(1, Geometry{7, 7, 30, 32}, 1), ArgumentError);
}

TEST(SynthTest, ShapesAndRange) {
  auto lf = synthesize_lf(single_layer(1.25, TextureKind::kSmoothNoise, 7, 128));
  EXPECT_EQ(lf.extent(), (LfExtent{7, 7, 128, 128, 3}));
  for (float v : lf.values()) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(SynthTest, DatasetIsDeterministicAndDegraded) {
  const Geometry g{7, 7, 32, 32};
  auto a = make_dataset(4, g, 7);
  auto b = make_dataset(4, g, 7);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(std::equal(a[k].hr.values().begin(), a[k].hr.values().end(), b[k].hr.values().begin()));
    EXPECT_TRUE(std::equal(a[k].lr.values().begin(), a[k].lr.values().end(), b[k].lr.values().begin()));
    EXPECT_EQ(a[k].lr.extent(), (LfExtent{7, 7, 8, 8, 3}));
  }
  auto c = make_dataset(1, g, 8);
  EXPECT_FALSE(std::equal(a[0].hr.values().begin(), a[0].hr.values().end(), c[0].hr.values().begin()));
}

TEST(SynthTest, RandomScenesSatisfyTheirBackgroundDisparity) {
  // Wherever no foreground rectangle reaches, views are translations of each
  // other by the background disparity (checked between views two apart to
  // land on whole pixels for half-pixel disparities).
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    SceneSpec spec = random_scene(Geometry{7, 7, 32, 32}, seed);
    spec.layers.resize(1);
    spec.layers[0].disparity = std::round(spec.layers[0].disparity * 2.0) / 2.0;
    auto lf = synthesize_lf(spec);
    EXPECT_LE(max_shift_error(lf, spec.layers[0].disparity, 2), 1e-6) << seed;
  }
}

TEST(SynthTest, DatasetRoundTripsThroughPngDirectories) {
  const fs::path root = fs::temp_directory_path() / ("lfsr_synth_" + std::to_string(::getpid()));
  auto data = make_dataset(2, Geometry{7, 7, 16, 16}, 3);
  save_dataset(data, root);
  EXPECT_TRUE(fs::exists(root / "scene_1" / "lr" / "view_00_00.png"));
  auto back = load_dataset(root);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].hr.extent(), data[1].hr.extent());
  EXPECT_EQ(back[1].lr.extent(), data[1].lr.extent());
  fs::remove_all(root);
  EXPECT_THROW(load_dataset(root), IngestionError);
}

}  // namespace
}  // namespace lfsr::synth
