#include "lfsr/pipeline/superresolve.hpp"

#include <algorithm>

#include "lfsr/ahqrg/ahqrg.hpp"
#include "lfsr/lfrefine/lfrefine.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"
#include "lfsr/numcore/random.hpp"
#include "lfsr/numcore/resample.hpp"
#include "lfsr/pipeline/weights_io.hpp"
#include "lfsr/texturetransformer/ttsr.hpp"

namespace lfsr {

template <typename T>
const StageWeights<T>& PipelineWeights<T>::require(Stage stage) const {
  const std::optional<StageWeights<T>>* slot = nullptr;
  switch (stage) {
    case Stage::kAhqrg:
      slot = &ahqrg;
      break;
    case Stage::kTtsr:
      slot = &ttsr;
      break;
    case Stage::kLfrefine:
      slot = &lfrefine;
      break;
  }
  if (!slot->has_value()) throw StateError("missing weights for stage " + std::string(stage_name(stage)));
  return **slot;
}

template <typename T>
PipelineWeights<T> fresh_pipeline_weights(std::uint64_t seed) {
  Rng rng(seed);
  PipelineWeights<T> w;
  w.ahqrg = ahqrg::init_weights<T>(rng.fork());
  w.ttsr = ttsr::init_weights<T>(rng.fork());
  w.lfrefine = lfrefine::init_weights<T>(rng.fork());
  return w;
}

std::filesystem::path weights_path(const std::filesystem::path& dir, Stage stage) {
  return dir / (std::string(stage_name(stage)) + ".lfwt");
}

template <typename T>
PipelineWeights<T> load_pipeline_weights(const std::filesystem::path& dir) {
  PipelineWeights<T> w;
  auto load = [&](Stage stage, std::optional<StageWeights<T>>& slot) {
    const auto path = weights_path(dir, stage);
    if (!std::filesystem::exists(path)) return;
    slot = load_weights<T>(path);
    if (slot->stage() != stage_name(stage)) {
      throw FormatError(path.string() + " holds stage '" + slot->stage() + "'");
    }
  };
  load(Stage::kAhqrg, w.ahqrg);
  load(Stage::kTtsr, w.ttsr);
  load(Stage::kLfrefine, w.lfrefine);
  return w;
}

LightField bicubic_lf(const LightField& lr_lf) {
  const auto& e = lr_lf.extent();
  std::vector<Tensor<float>> views;
  views.reserve(static_cast<std::size_t>(e.u) * e.v);
  for (int u = 0; u < e.u; ++u) {
    for (int v = 0; v < e.v; ++v) {
      views.push_back(clamp(bicubic_resize(extract_view<float>(lr_lf, u, v), Scale{4, 1}), 0.0f, 1.0f));
    }
  }
  return from_views(e.u, e.v, views);
}

template <typename T>
LightField ttsr_light_field(const LightField& lr_lf, const Tensor<T>& reference, const StageWeights<T>& ttsr_w,
                            const std::vector<int>& order) {
  const auto& e = lr_lf.extent();
  const int n = e.u * e.v;
  std::vector<int> sequence = order;
  if (sequence.empty()) {
    sequence.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sequence[static_cast<std::size_t>(i)] = i;
  } else {
    auto sorted = sequence;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(sorted.size()) != n || sorted[static_cast<std::size_t>(i)] != i) {
        throw ArgumentError("view order must be a permutation of 0.." + std::to_string(n - 1));
      }
    }
  }
  const auto prepared = ttsr::prepare_reference(reference, ttsr_w);
  std::vector<Tensor<T>> views(static_cast<std::size_t>(n));
  for (int i : sequence) {
    views[static_cast<std::size_t>(i)] = ttsr::forward(extract_view<T>(lr_lf, i / e.v, i % e.v), prepared, ttsr_w);
  }
  return from_views(e.u, e.v, views);
}

template <typename T>
SuperResolved<T> superresolve_lf(const LightField& lr_lf, const PipelineWeights<T>& weights) {
  const auto& a = weights.require(Stage::kAhqrg);
  const auto& t = weights.require(Stage::kTtsr);
  const auto& r = weights.require(Stage::kLfrefine);
  SuperResolved<T> out;
  out.reference = ahqrg::forward<T>(lr_lf, a);
  out.ttsr_lf = ttsr_light_field(lr_lf, out.reference, t);
  out.refined_lf = lfrefine::forward<T>(out.ttsr_lf, r);
  return out;
}

#define LFSR_INSTANTIATE_SUPERRESOLVE(T)                                                                     \
  template struct PipelineWeights<T>;                                                                       \
  template PipelineWeights<T> fresh_pipeline_weights<T>(std::uint64_t);                                      \
  template PipelineWeights<T> load_pipeline_weights<T>(const std::filesystem::path&);                        \
  template LightField ttsr_light_field(const LightField&, const Tensor<T>&, const StageWeights<T>&,           \
                                       const std::vector<int>&);                                            \
  template SuperResolved<T> superresolve_lf(const LightField&, const PipelineWeights<T>&);

LFSR_INSTANTIATE_SUPERRESOLVE(float)
LFSR_INSTANTIATE_SUPERRESOLVE(double)

}  // namespace lfsr
