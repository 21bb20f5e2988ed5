#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "lfsr/lightfield/lightfield.hpp"
#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/tensor.hpp"
#include "lfsr/pipeline/config.hpp"

namespace lfsr {

template <typename T>
struct PipelineWeights {
  std::optional<StageWeights<T>> ahqrg;
  std::optional<StageWeights<T>> ttsr;
  std::optional<StageWeights<T>> lfrefine;

  // Throws StateError naming the stage when it is absent.
  const StageWeights<T>& require(Stage stage) const;
};

// Fresh weights for all three stages, each seeded from `seed`.
template <typename T>
PipelineWeights<T> fresh_pipeline_weights(std::uint64_t seed);

// "<dir>/<stage>.lfwt".
std::filesystem::path weights_path(const std::filesystem::path& dir, Stage stage);

// Loads whichever stage files exist under `dir`.
template <typename T>
PipelineWeights<T> load_pipeline_weights(const std::filesystem::path& dir);

template <typename T>
struct SuperResolved {
  Tensor<T> reference;  // [3,4h,4w]
  LightField ttsr_lf;
  LightField refined_lf;
};

// Per-view clamped bicubic x4, the baseline every stage reduces to with
// zero residuals.
LightField bicubic_lf(const LightField& lr_lf);

// Super-resolves every view against one reference. `order` lists u-major
// view indices in processing order; empty means 0..U*V-1.
template <typename T>
LightField ttsr_light_field(const LightField& lr_lf, const Tensor<T>& reference, const StageWeights<T>& ttsr,
                            const std::vector<int>& order = {});

// Reference, per-view texture transfer, then joint refinement.
template <typename T>
SuperResolved<T> superresolve_lf(const LightField& lr_lf, const PipelineWeights<T>& weights);

}  // namespace lfsr
