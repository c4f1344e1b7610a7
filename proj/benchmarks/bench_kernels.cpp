#include <benchmark/benchmark.h>

#include <vector>

#include "qscale/certify.hpp"
#include "qscale/quasiprob.hpp"

using namespace qscale;

static void BM_DisplacementRadial(benchmark::State& st) {
  const int dim = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(displacement_radial(dim, 2.5));
}
BENCHMARK(BM_DisplacementRadial)->Arg(12)->Arg(40)->Arg(80);

static void BM_ReconstructState(benchmark::State& st) {
  const int dim = static_cast<int>(st.range(0));
  const auto rho = make_state(state::RandomPure{7}, FockDim(dim));
  const auto chi = char_fn(rho, OrderingParam(0.0));
  for (auto _ : st) benchmark::DoNotOptimize(reconstruct_state(chi, FockDim(dim)));
}
BENCHMARK(BM_ReconstructState)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_WeylImages(benchmark::State& st) {
  const int dim = static_cast<int>(st.range(0));
  std::vector<Eigen::MatrixXcd> sources;
  for (int i = 0; i < 4; ++i) sources.push_back(make_state(state::RandomPure{100u + i}, FockDim(dim)).matrix());
  const PhaseSpaceAction action{0.6, 0.2};
  for (auto _ : st) benchmark::DoNotOptimize(weyl_images(sources, action, dim));
}
BENCHMARK(BM_WeylImages)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_Choi(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const auto spec = ChannelSpec::scaling(0.3, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(choi(spec, d));
}
BENCHMARK(BM_Choi)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
