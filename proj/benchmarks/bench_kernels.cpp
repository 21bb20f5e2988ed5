#include <benchmark/benchmark.h>

#include "lfsr/ahqrg/ahqrg.hpp"
#include "lfsr/lfrefine/lfrefine.hpp"
#include "lfsr/lightfield/interleaved.hpp"
#include "lfsr/numcore.hpp"
#include "lfsr/texturetransformer/ttsr.hpp"

namespace lfsr {
namespace {

void BM_Conv2d(benchmark::State& state) {
  const auto side = state.range(0);
  Rng rng(1);
  auto x = uniform_tensor<float>(Shape{64, side, side}, -1, 1, rng);
  auto k = uniform_tensor<float>(Shape{64, 64, 3, 3}, -1, 1, rng);
  auto b = uniform_tensor<float>(Shape{64}, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, k, b, 1, 1));
  state.SetItemsProcessed(state.iterations() * side * side * 64 * 64 * 9);
}
BENCHMARK(BM_Conv2d)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Conv3d(benchmark::State& state) {
  Rng rng(2);
  auto x = uniform_tensor<float>(Shape{16, 49, 32, 32}, -1, 1, rng);
  auto k = uniform_tensor<float>(Shape{16, 16, 3, 3, 3}, -1, 1, rng);
  auto b = uniform_tensor<float>(Shape{16}, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(conv3d(x, k, b, 1, {1, 1, 1}));
}
BENCHMARK(BM_Conv3d)->Unit(benchmark::kMillisecond);

void BM_SpatialAngularPair(benchmark::State& state) {
  Rng rng(3);
  auto lf = uniform_tensor<float>(Shape{16, 7, 7, 32, 32}, -1, 1, rng);
  auto k = uniform_tensor<float>(Shape{16, 16, 3, 3}, -1, 1, rng);
  auto b = uniform_tensor<float>(Shape{16}, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(angular_conv(spatial_conv(lf, k, b), k, b));
}
BENCHMARK(BM_SpatialAngularPair)->Unit(benchmark::kMillisecond);

void BM_BicubicUp4(benchmark::State& state) {
  const auto side = state.range(0);
  Rng rng(4);
  auto x = uniform_tensor<float>(Shape{3, side, side}, 0, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bicubic_resize(x, Scale{4, 1}));
  state.SetItemsProcessed(state.iterations() * 3 * 16 * side * side);
}
BENCHMARK(BM_BicubicUp4)->Arg(32)->Arg(128);

void BM_UnfoldFold(benchmark::State& state) {
  const PatchGeometry g{static_cast<int>(state.range(0)), static_cast<int>(state.range(0) / 3),
                        static_cast<int>(state.range(0) / 3)};
  const std::int64_t side = 32 * g.stride;
  Rng rng(5);
  auto x = uniform_tensor<float>(Shape{64, side, side}, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fold_patches(unfold_patches(x, g), g, side, side));
}
BENCHMARK(BM_UnfoldFold)->Arg(3)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Relevance(benchmark::State& state) {
  const auto side = state.range(0);
  Rng rng(6);
  auto q = uniform_tensor<float>(Shape{64, side, side}, -1, 1, rng);
  auto k = uniform_tensor<float>(Shape{64, side, side}, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ttsr::attend(q, k));
}
BENCHMARK(BM_Relevance)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TtsrView(benchmark::State& state) {
  Rng rng(7);
  const auto w = ttsr::init_weights<float>(8);
  auto ref = uniform_tensor<float>(Shape{3, 128, 128}, 0, 1, rng);
  auto lr = uniform_tensor<float>(Shape{3, 32, 32}, 0, 1, rng);
  const auto prepared = ttsr::prepare_reference(ref, w);
  for (auto _ : state) benchmark::DoNotOptimize(ttsr::forward(lr, prepared, w));
}
BENCHMARK(BM_TtsrView)->Unit(benchmark::kMillisecond);

void BM_AhqrgForward(benchmark::State& state) {
  Rng rng(9);
  const auto w = ahqrg::init_weights<float>(10);
  auto x = uniform_tensor<float>(Shape{3, 7, 7, 32, 32}, 0, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ahqrg::forward(x, w));
}
BENCHMARK(BM_AhqrgForward)->Unit(benchmark::kMillisecond);

void BM_LfrefineForward(benchmark::State& state) {
  Rng rng(11);
  const auto w = lfrefine::init_weights<float>(12);
  auto x = uniform_tensor<float>(Shape{3, 7, 7, 64, 64}, 0, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lfrefine::forward(x, w));
}
BENCHMARK(BM_LfrefineForward)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lfsr

BENCHMARK_MAIN();
