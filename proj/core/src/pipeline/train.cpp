#include "lfsr/pipeline/train.hpp"

#include <charconv>

#include "lfsr/ahqrg/ahqrg.hpp"
#include "lfsr/lfrefine/lfrefine.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"
#include "lfsr/numcore/optim.hpp"
#include "lfsr/numcore/record.hpp"
#include "lfsr/pipeline/superresolve.hpp"
#include "lfsr/texturetransformer/ttsr.hpp"

namespace lfsr {
namespace {

// [C,H,W] window starting at (y0, x0). Inputs here are frozen, so the crop
// is not recorded.
template <typename T>
Tensor<T> crop_chw(const Tensor<T>& t, std::int64_t y0, std::int64_t x0, std::int64_t h, std::int64_t w) {
  const std::int64_t c = t.dim(0), H = t.dim(1), W = t.dim(2);
  Tensor<T> out(Shape{c, h, w});
  auto src = t.data();
  auto dst = out.data_mut();
  for (std::int64_t k = 0; k < c; ++k) {
    for (std::int64_t y = 0; y < h; ++y) {
      for (std::int64_t x = 0; x < w; ++x) dst[(k * h + y) * w + x] = src[(k * H + y0 + y) * W + x0 + x];
    }
  }
  return out;
}

template <typename T>
StageWeights<T> fresh_weights(Stage stage, std::uint64_t seed) {
  switch (stage) {
    case Stage::kAhqrg:
      return ahqrg::init_weights<T>(seed);
    case Stage::kTtsr:
      return ttsr::init_weights<T>(seed);
    case Stage::kLfrefine:
      return lfrefine::init_weights<T>(seed);
  }
  throw ArgumentError("unknown stage");
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, int n_scenes, const LfExtent& lr_extent, int crop)
    : rng_(seed), n_scenes_(n_scenes), extent_(lr_extent), crop_(crop) {
  if (n_scenes < 1) throw ArgumentError("sample stream needs at least one scene");
  if (crop < 0 || crop > lr_extent.h || crop > lr_extent.w) {
    throw ArgumentError("crop " + std::to_string(crop) + " does not fit " + std::to_string(lr_extent.h) + "x" +
                        std::to_string(lr_extent.w) + " low-resolution views");
  }
}

TrainSample SampleStream::next() {
  TrainSample s;
  s.scene = static_cast<int>(rng_.below(n_scenes_));
  s.u = static_cast<int>(rng_.below(extent_.u));
  s.v = static_cast<int>(rng_.below(extent_.v));
  if (crop_ > 0) {
    s.y0 = static_cast<int>(rng_.below(extent_.h - crop_ + 1));
    s.x0 = static_cast<int>(rng_.below(extent_.w - crop_ + 1));
  }
  return s;
}

TrainSeeds derive_train_seeds(std::uint64_t seed) {
  Rng rng(seed);
  const auto init = rng.fork();
  return {init, rng.fork()};
}

template <typename T>
TrainResult<T> train_stage(const TrainConfig& config, const std::vector<synth::ScenePair>& dataset,
                           const Upstream<T>& upstream, const StepObserver& observer) {
  config.validate();
  if (dataset.empty()) throw ArgumentError("training needs a non-empty dataset");
  const Stage stage = config.stage;
  if ((stage == Stage::kTtsr || stage == Stage::kLfrefine) && upstream.ahqrg == nullptr) {
    throw StateError("training " + std::string(stage_name(stage)) + " requires ahqrg weights");
  }
  if (stage == Stage::kLfrefine && upstream.ttsr == nullptr) {
    throw StateError("training lfrefine requires ttsr weights");
  }

  const int n_scenes = config.scenes > 0 ? std::min<int>(config.scenes, static_cast<int>(dataset.size()))
                                         : static_cast<int>(dataset.size());
  const LfExtent lr_extent = dataset.front().lr.extent();
  for (int k = 0; k < n_scenes; ++k) {
    if (dataset[static_cast<std::size_t>(k)].lr.extent() != lr_extent) {
      throw ArgumentError("training scenes differ in extent");
    }
  }
  const auto seeds = derive_train_seeds(config.seed);
  SampleStream samples(seeds.samples, n_scenes, lr_extent, config.crop);
  const int ch = config.crop > 0 ? config.crop : lr_extent.h;
  const int cw = config.crop > 0 ? config.crop : lr_extent.w;

  // Frozen upstream outputs on whole scenes.
  std::vector<Tensor<T>> references;
  std::vector<LightField> ttsr_lfs;
  if (stage != Stage::kAhqrg) {
    for (int k = 0; k < n_scenes; ++k) {
      const auto& lr = dataset[static_cast<std::size_t>(k)].lr;
      auto ref = ahqrg::forward<T>(lr, *upstream.ahqrg);
      if (stage == Stage::kLfrefine) ttsr_lfs.push_back(ttsr_light_field(lr, ref, *upstream.ttsr));
      references.push_back(std::move(ref));
    }
  }

  auto sample_loss = [&](const TrainSample& s, const StageWeights<T>& w) {
    const auto& pair = dataset[static_cast<std::size_t>(s.scene)];
    const auto lr = crop_spatial(pair.lr, s.y0, s.x0, ch, cw);
    const auto hr = crop_spatial(pair.hr, 4 * s.y0, 4 * s.x0, 4 * ch, 4 * cw);
    switch (stage) {
      case Stage::kAhqrg:
        return l1_loss(ahqrg::forward<T>(lf_to_tensor<T>(lr), w), central_view<T>(hr));
      case Stage::kTtsr: {
        const auto ref = crop_chw(references[static_cast<std::size_t>(s.scene)], 4 * s.y0, 4 * s.x0, 4 * ch, 4 * cw);
        return l1_loss(ttsr::forward<T>(extract_view<T>(lr, s.u, s.v), ref, w), extract_view<T>(hr, s.u, s.v));
      }
      case Stage::kLfrefine: {
        const auto input = crop_spatial(ttsr_lfs[static_cast<std::size_t>(s.scene)], 4 * s.y0, 4 * s.x0, 4 * ch, 4 * cw);
        const auto pred = lfrefine::forward<T>(lf_to_tensor<T>(input), w);
        const auto gt = lf_to_tensor<T>(hr);
        return add(l1_loss(pred, gt), scale(lfrefine::epi_loss(pred, gt), static_cast<T>(config.lambda_epi)));
      }
    }
    throw ArgumentError("unknown stage");
  };

  TrainResult<T> result{fresh_weights<T>(stage, seeds.init), {}};
  auto& w = result.weights;
  const AdamConfig adam{config.lr};
  const T inv_batch = static_cast<T>(1.0 / config.batch_size);
  result.loss_log.reserve(static_cast<std::size_t>(config.steps));
  for (long step = 1; step <= config.steps; ++step) {
    w.zero_grad();
    double total = 0.0;
    for (int b = 0; b < config.batch_size; ++b) {
      const auto s = samples.next();
      DiffRecord<T> record;
      const auto loss = sample_loss(s, w);
      total += static_cast<double>(loss.item());
      backward(scale(loss, inv_batch), record);
    }
    adam_step(w, adam, step);
    const double mean = total / config.batch_size;
    result.loss_log.push_back(mean);
    if (observer) observer(step, mean);
  }
  return result;
}

std::string format_loss_log(const std::vector<double>& log) {
  std::string out;
  char buf[64];
  for (double v : log) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, ptr);
    out += '\n';
  }
  return out;
}

template TrainResult<float> train_stage(const TrainConfig&, const std::vector<synth::ScenePair>&,
                                        const Upstream<float>&, const StepObserver&);
template TrainResult<double> train_stage(const TrainConfig&, const std::vector<synth::ScenePair>&,
                                         const Upstream<double>&, const StepObserver&);

}  // namespace lfsr
