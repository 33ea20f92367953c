#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "cmgn/injector.hpp"
#include "cmgn/pattern_gen.hpp"

namespace {

const cmgn::PatternBank& bank() {
  static const cmgn::PatternBank b = [] {
    cmgn::BankOptions opts;
    opts.variants = 2;
    opts.master_seed = 1;
    return cmgn::build_bank(opts);
  }();
  return b;
}

const cmgn::PlanarImage& frame() {
  static const cmgn::PlanarImage img = [] {
    std::mt19937_64 gen(1);
    std::array<cmgn::CodewordPlane, 3> planes;
    for (auto& p : planes) {
      p = cmgn::CodewordPlane(1920, 1080);
      for (auto& v : p.values()) v = static_cast<cmgn::Codeword>(gen() % 1024);
    }
    return cmgn::PlanarImage(std::move(planes), 10);
  }();
  return img;
}

const cmgn::Blut blut = cmgn::clipped_power_blut(32, 980, 0.0, 0.98, 2.0);

void BM_InjectFrameSerialReference(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmgn::serial::inject_frame(frame(), blut, bank(), {}));
  }
}
BENCHMARK(BM_InjectFrameSerialReference)->Unit(benchmark::kMillisecond);

void BM_InjectFrameParallel(benchmark::State& state) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmgn::inject_frame(frame(), blut, bank(), {}));
  }
  omp_set_num_threads(saved);
}
BENCHMARK(BM_InjectFrameParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_VoronoiAssign(benchmark::State& state) {
  const cmgn::SiteSet sites = cmgn::random_sites(100, 300, 3);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cmgn::voronoi_assign(100, sites));
  omp_set_num_threads(saved);
}
BENCHMARK(BM_VoronoiAssign)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_BankBlock(benchmark::State& state) {
  cmgn::BankOptions opts;
  int v = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cmgn::build_bank_block(opts, 6, v++ % 8));
}
BENCHMARK(BM_BankBlock)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
