#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lfsr/lightfield/lightfield.hpp"
#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/random.hpp"
#include "lfsr/pipeline/config.hpp"
#include "lfsr/synthdata/synth.hpp"

namespace lfsr {

// One training example: a scene, a view (used by the texture stage only)
// and the top-left corner of the low-resolution crop.
struct TrainSample {
  int scene = 0;
  int u = 0;
  int v = 0;
  int y0 = 0;
  int x0 = 0;
};

// Seeded stream of uniformly drawn training samples.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, int n_scenes, const LfExtent& lr_extent, int crop);
  TrainSample next();
  int crop() const { return crop_; }

 private:
  Rng rng_;
  int n_scenes_;
  LfExtent extent_;
  int crop_;
};

// Seeds derived from TrainConfig::seed for weight initialisation and for
// the sample stream.
struct TrainSeeds {
  std::uint64_t init;
  std::uint64_t samples;
};
TrainSeeds derive_train_seeds(std::uint64_t seed);

// Frozen upstream stages. The texture stage needs `ahqrg`; the refinement
// stage needs both.
template <typename T>
struct Upstream {
  const StageWeights<T>* ahqrg = nullptr;
  const StageWeights<T>* ttsr = nullptr;
};

template <typename T>
struct TrainResult {
  StageWeights<T> weights;
  std::vector<double> loss_log;  // batch-mean loss of every step
};

// Called after each step with (step, loss).
using StepObserver = std::function<void(long, double)>;

// Trains one stage from fresh weights with Adam. Per-sample losses:
//   ahqrg:    L1 to the ground-truth central view,
//   ttsr:     L1 to the ground-truth view (u,v),
//   lfrefine: L1 + lambda_epi * epi_loss to the ground-truth light field.
// Throws StateError when a required upstream stage is missing and
// ArgumentError when the crop does not fit the dataset.
template <typename T>
TrainResult<T> train_stage(const TrainConfig& config, const std::vector<synth::ScenePair>& dataset,
                           const Upstream<T>& upstream = {}, const StepObserver& observer = {});

// One loss log value per line, printed with 17 significant digits.
std::string format_loss_log(const std::vector<double>& log);

}  // namespace lfsr
