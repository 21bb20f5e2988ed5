#include "lfsr/numcore/optim.hpp"

#include <cmath>

#include "lfsr/numcore/errors.hpp"

namespace lfsr {

template <typename T>
void adam_step(StageWeights<T>& params, const AdamConfig& config, long t) {
  if (t < 1) throw ArgumentError("adam_step: step index must be >= 1");
  auto& entries = params.entries();
  for (const auto& e : entries) {
    if (!e.tensor.has_grad()) {
      throw StateError("adam_step: entry '" + e.name + "' of stage '" + params.stage() + "' has no gradient");
    }
  }
  auto& moments = params.optimizer_state();
  if (moments.size() != entries.size()) {
    moments.assign(entries.size(), AdamMoments<T>{});
    for (std::size_t i = 0; i < entries.size(); ++i) {
      moments[i].first.assign(entries[i].tensor.data().size(), T(0));
      moments[i].second.assign(entries[i].tensor.data().size(), T(0));
    }
  }
  const double b1 = config.beta1, b2 = config.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto w = entries[i].tensor.data_mut();
    auto g = entries[i].tensor.grad();
    auto& m = moments[i].first;
    auto& v = moments[i].second;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double gj = static_cast<double>(g[j]);
      const double mj = b1 * static_cast<double>(m[j]) + (1.0 - b1) * gj;
      const double vj = b2 * static_cast<double>(v[j]) + (1.0 - b2) * gj * gj;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double update = config.lr * (mj / c1) / (std::sqrt(vj / c2) + config.eps);
      w[j] = static_cast<T>(static_cast<double>(w[j]) - update);
    }
  }
}

template void adam_step(StageWeights<float>&, const AdamConfig&, long);
template void adam_step(StageWeights<double>&, const AdamConfig&, long);

}  // namespace lfsr
