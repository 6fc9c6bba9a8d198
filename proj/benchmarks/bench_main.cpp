#include <benchmark/benchmark.h>

#include <random>

#include "wavebasis/cauchy_solver.hpp"
#include "wavebasis/klein_gordon.hpp"
#include "wavebasis/lie_action.hpp"
#include "wavebasis/modes.hpp"

using namespace wavebasis;

static void BM_ModeEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto modes = enumerate_modes(n, 12);
  std::vector<ModeFunction> fs;
  for (const auto& m : modes) fs.emplace_back(n, m);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  std::vector<double> x(n);
  for (auto& v : x) v = U(rng);
  const double t = U(rng);
  for (auto _ : state) {
    cplx s = 0.0;
    for (const auto& f : fs) s += f(t, x);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(fs.size()));
}
BENCHMARK(BM_ModeEvaluate)->Arg(2)->Arg(3)->Arg(5);

static void BM_ExactKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModeIndex idx = enumerate_modes(n, 16).back();
  for (auto _ : state) benchmark::DoNotOptimize(rational_mode(idx, n).kernel_residual().is_zero());
}
BENCHMARK(BM_ExactKernel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_WaveResidual(benchmark::State& state) {
  const int n = 4;
  const Field f = mode(enumerate_modes(n, 15).back(), n).field();
  const std::vector<double> p{0.3, -0.2, 0.5, 0.1, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(wave_residual(f, p));
}
BENCHMARK(BM_WaveResidual);

static void BM_Gram(benchmark::State& state) {
  const int n = 3;
  const auto modes = enumerate_modes(n, static_cast<int>(state.range(0)));
  const Picture pic = state.range(1) ? Picture::noncompact : Picture::compact;
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(modes, n, pic));
  state.counters["modes"] = static_cast<double>(modes.size());
}
BENCHMARK(BM_Gram)->Args({8, 0})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

static void BM_ExpandGaussian(benchmark::State& state) {
  const int p_max = static_cast<int>(state.range(0));
  const CauchyData d = CauchyData::gaussian(3);
  for (auto _ : state) benchmark::DoNotOptimize(expand(d, 3, p_max));
}
BENCHMARK(BM_ExpandGaussian)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state) {
  const Expansion e = expand(CauchyData::gaussian(3), 3, 30);
  std::vector<std::vector<double>> pts;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) pts.push_back({U(rng), U(rng), U(rng), U(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(e, pts));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

static void BM_Leapfrog(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const CauchyData d = CauchyData::gaussian(3);
  const double L = 3.0, h = 2 * L / cells, dt = 0.5 * h;
  const int steps = static_cast<int>(1.0 / dt);
  for (auto _ : state) benchmark::DoNotOptimize(leapfrog(d, 3, L, cells, dt, steps, {steps}, 1.0, 1));
}
BENCHMARK(BM_Leapfrog)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
