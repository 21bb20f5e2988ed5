#include "lfsr/synthdata/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfsr/lightfield/io.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/random.hpp"
#include "lfsr/numcore/resample.hpp"

namespace fs = std::filesystem;

namespace lfsr::synth {
namespace {

// Planar RGB raster [3, height, width] holding one layer's texture over the
// frame plus a margin wide enough for the largest view shift.
struct Canvas {
  int height = 0, width = 0, margin = 0;
  std::vector<double> rgb;

  double& at(int c, int y, int x) { return rgb[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  double at(int c, int y, int x) const { return rgb[(static_cast<std::size_t>(c) * height + y) * width + x]; }
};

std::array<double, 3> random_colour(Rng& rng) { return {rng.uniform(), rng.uniform(), rng.uniform()}; }

void paint_checkerboard(Canvas& cv, Rng& rng) {
  const int period = static_cast<int>(rng.between(4, 16));
  const int ox = static_cast<int>(rng.below(period * 2)), oy = static_cast<int>(rng.below(period * 2));
  const auto a = random_colour(rng), b = random_colour(rng);
  for (int y = 0; y < cv.height; ++y)
    for (int x = 0; x < cv.width; ++x) {
      const bool odd = (((x + ox) / period) + ((y + oy) / period)) % 2 != 0;
      for (int c = 0; c < 3; ++c) cv.at(c, y, x) = odd ? a[c] : b[c];
    }
}

void paint_smooth_noise(Canvas& cv, Rng& rng) {
  const double spacing = static_cast<double>(rng.between(3, 10));
  const int gh = static_cast<int>(std::ceil(cv.height / spacing)) + 4;
  const int gw = static_cast<int>(std::ceil(cv.width / spacing)) + 4;
  std::vector<double> grid(static_cast<std::size_t>(3) * gh * gw);
  for (auto& g : grid) g = rng.uniform();
  for (int y = 0; y < cv.height; ++y) {
    const CubicTap ty = cubic_tap(y / spacing + 1.0, gh);
    for (int x = 0; x < cv.width; ++x) {
      const CubicTap tx = cubic_tap(x / spacing + 1.0, gw);
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            acc += ty.weight[i] * tx.weight[j] * grid[(static_cast<std::size_t>(c) * gh + ty.index[i]) * gw + tx.index[j]];
        cv.at(c, y, x) = std::clamp(acc, 0.0, 1.0);
      }
    }
  }
}

void paint_gradient(Canvas& cv, Rng& rng) {
  const double theta = rng.uniform(0.0, 2.0 * M_PI);
  const double cx = cv.width / 2.0, cy = cv.height / 2.0;
  const double length = std::max(cv.width, cv.height) * rng.uniform(0.5, 1.0);
  const auto a = random_colour(rng), b = random_colour(rng);
  for (int y = 0; y < cv.height; ++y)
    for (int x = 0; x < cv.width; ++x) {
      const double s = std::clamp(((x - cx) * std::cos(theta) + (y - cy) * std::sin(theta)) / length + 0.5, 0.0, 1.0);
      for (int c = 0; c < 3; ++c) cv.at(c, y, x) = a[c] + (b[c] - a[c]) * s;
    }
}

Canvas paint(const Layer& layer, int h, int w, int margin) {
  Canvas cv{h + 2 * margin, w + 2 * margin, margin, {}};
  cv.rgb.assign(static_cast<std::size_t>(3) * cv.height * cv.width, 0.0);
  Rng rng(layer.texture_seed);
  switch (layer.texture) {
    case TextureKind::kCheckerboard: paint_checkerboard(cv, rng); break;
    case TextureKind::kSmoothNoise: paint_smooth_noise(cv, rng); break;
    case TextureKind::kGradient: paint_gradient(cv, rng); break;
  }
  return cv;
}

bool covers(const std::optional<Rect>& region, double x, double y) {
  if (!region) return true;
  return x >= region->x0 && x < region->x1 && y >= region->y0 && y < region->y1;
}

void validate(const SceneSpec& spec) {
  if (spec.layers.empty()) throw ArgumentError("synthesize_lf: scene has no layers");
  if (spec.u < 1 || spec.v < 1 || spec.h < 1 || spec.w < 1) throw ArgumentError("synthesize_lf: bad geometry");
  bool full = false;
  for (const auto& l : spec.layers) {
    if (!(std::abs(l.disparity) <= kMaxDisparity)) {
      throw ArgumentError("synthesize_lf: |disparity| " + std::to_string(l.disparity) + " exceeds 3 px/view");
    }
    full = full || !l.region.has_value();
  }
  if (!full) throw ArgumentError("synthesize_lf: no layer covers the full frame");
}

}  // namespace

LightField synthesize_lf(const SceneSpec& spec) {
  validate(spec);
  const double uc = (spec.u - 1) / 2.0, vc = (spec.v - 1) / 2.0;
  const int margin = static_cast<int>(std::ceil(kMaxDisparity * std::max(uc, vc))) + 3;
  std::vector<Canvas> canvases;
  canvases.reserve(spec.layers.size());
  for (const auto& layer : spec.layers) canvases.push_back(paint(layer, spec.h, spec.w, margin));

  LfExtent e{spec.u, spec.v, spec.h, spec.w, 3};
  std::vector<float> values(static_cast<std::size_t>(e.count()));
  std::vector<double> view(static_cast<std::size_t>(3) * spec.h * spec.w);
  std::vector<CubicTap> xtaps(static_cast<std::size_t>(spec.w)), ytaps(static_cast<std::size_t>(spec.h));
  std::vector<double> rows;

  for (int u = 0; u < spec.u; ++u) {
    for (int v = 0; v < spec.v; ++v) {
      for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& layer = spec.layers[li];
        const Canvas& cv = canvases[li];
        const double dx = layer.disparity * (u - uc);
        const double dy = layer.disparity * (v - vc);
        for (int x = 0; x < spec.w; ++x) xtaps[x] = cubic_tap(x + margin + dx, cv.width);
        for (int y = 0; y < spec.h; ++y) ytaps[y] = cubic_tap(y + margin + dy, cv.height);
        for (int y = 0; y < spec.h; ++y) {
          const CubicTap& ty = ytaps[y];
          for (int x = 0; x < spec.w; ++x) {
            if (!covers(layer.region, x + dx, y + dy)) continue;
            const CubicTap& tx = xtaps[x];
            for (int c = 0; c < 3; ++c) {
              double acc = 0.0;
              for (int i = 0; i < 4; ++i) {
                double row = 0.0;
                for (int j = 0; j < 4; ++j) row += tx.weight[j] * cv.at(c, static_cast<int>(ty.index[i]), static_cast<int>(tx.index[j]));
                acc += ty.weight[i] * row;
              }
              view[(static_cast<std::size_t>(c) * spec.h + y) * spec.w + x] = acc;
            }
          }
        }
      }
      float* dst = values.data() + (static_cast<std::size_t>(u) * spec.v + v) * spec.h * spec.w * 3;
      const std::size_t plane = static_cast<std::size_t>(spec.h) * spec.w;
      for (std::size_t p = 0; p < plane; ++p)
        for (int c = 0; c < 3; ++c) dst[p * 3 + c] = static_cast<float>(view[c * plane + p]);
    }
  }
  return LightField(e, std::move(values));
}

SceneSpec random_scene(const Geometry& g, std::uint64_t seed) {
  Rng rng(seed);
  SceneSpec spec;
  spec.u = g.u;
  spec.v = g.v;
  spec.h = g.h;
  spec.w = g.w;
  spec.seed = seed;
  auto kind = [&]() { return static_cast<TextureKind>(rng.below(3)); };
  spec.layers.push_back(Layer{kind(), rng.fork(), rng.uniform(-2.0, 2.0), std::nullopt});
  const int foreground = static_cast<int>(rng.between(1, 2));
  for (int i = 0; i < foreground; ++i) {
    const double rw = g.w * rng.uniform(0.3, 0.6), rh = g.h * rng.uniform(0.3, 0.6);
    const double x0 = rng.uniform(0.0, g.w - rw), y0 = rng.uniform(0.0, g.h - rh);
    spec.layers.push_back(Layer{kind(), rng.fork(), rng.uniform(-2.0, 2.0), Rect{x0, y0, x0 + rw, y0 + rh}});
  }
  return spec;
}

std::vector<ScenePair> make_dataset(int n_scenes, const Geometry& geometry, std::uint64_t seed) {
  if (geometry.h % 4 != 0 || geometry.w % 4 != 0) {
    throw ArgumentError("make_dataset: spatial extents " + std::to_string(geometry.h) + "x" +
                        std::to_string(geometry.w) + " not divisible by 4");
  }
  if (n_scenes < 0) throw ArgumentError("make_dataset: negative scene count");
  Rng rng(seed);
  std::vector<ScenePair> out;
  out.reserve(static_cast<std::size_t>(n_scenes));
  for (int k = 0; k < n_scenes; ++k) {
    LightField hr = synthesize_lf(random_scene(geometry, rng.fork()));
    LightField lr = degrade_lf(hr, 4);
    out.push_back(ScenePair{std::move(hr), std::move(lr)});
  }
  return out;
}

void save_dataset(const std::vector<ScenePair>& dataset, const fs::path& root) {
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    const fs::path scene = root / ("scene_" + std::to_string(k));
    save_lightfield(dataset[k].hr, scene / "hr");
    save_lightfield(dataset[k].lr, scene / "lr");
  }
}

std::vector<ScenePair> load_dataset(const fs::path& root) {
  std::vector<ScenePair> out;
  for (std::size_t k = 0;; ++k) {
    const fs::path scene = root / ("scene_" + std::to_string(k));
    if (!fs::is_directory(scene)) break;
    out.push_back(ScenePair{load_lightfield(scene / "hr"), load_lightfield(scene / "lr")});
  }
  if (out.empty()) throw IngestionError("no scene_{k} directories under " + root.string());
  return out;
}

}  // namespace lfsr::synth
