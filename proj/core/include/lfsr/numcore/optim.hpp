#pragma once

#include "lfsr/numcore/params.hpp"

namespace lfsr {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected adaptive-moment update at step t (t >= 1). Moment
// buffers live in `params` and persist across calls; grads are read only.
// Throws StateError when any entry lacks a gradient.
template <typename T>
void adam_step(StageWeights<T>& params, const AdamConfig& config, long t);

}  // namespace lfsr
