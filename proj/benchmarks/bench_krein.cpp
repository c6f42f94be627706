#include <benchmark/benchmark.h>

#include <random>

#include "krein/finite_model.hpp"
#include "krein/laplace_kernels.hpp"
#include "krein/point_interactions.hpp"
#include "krein/segment.hpp"

using namespace krein;

static void BM_KreinRankN(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const FiniteModel m = random_finite_model(rng, state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(krein_rank_n(m, cplx(0.3, 1.0)));
}
BENCHMARK(BM_KreinRankN)->Arg(16)->Arg(64)->Arg(256);

static void BM_DirectPerturbed(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const FiniteModel m = random_finite_model(rng, state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(direct_perturbed(m, cplx(0.3, 1.0)));
}
BENCHMARK(BM_DirectPerturbed)->Arg(16)->Arg(64)->Arg(256);

static void BM_FreeResolvent(benchmark::State& state) {
  const RadialSource h = RadialSource::gaussian(Point::Zero(), 0.3);
  const Energy e(cplx(-1.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(apply_free_resolvent(e, h, Point(0.4, 0.1, -0.2)));
}
BENCHMARK(BM_FreeResolvent);

static void BM_LatticeBoundStates(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const PointConfiguration lattice = make_lattice({n, n, n}, 1.0, Point::Zero());
  const PointModel model(lattice, CMatrix::Identity(lattice.size(), lattice.size()) * 0.15);
  for (auto _ : state) benchmark::DoNotOptimize(bound_states(model, 0.1, 4.0, 100));
}
BENCHMARK(BM_LatticeBoundStates)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SegmentResolvent(benchmark::State& state) {
  const SegmentModel model =
      SegmentModel::uniform(1.0, Potential::constant(0.0), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(SegmentResolvent(model, Energy(kI)));
}
BENCHMARK(BM_SegmentResolvent)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_LogBoundaryTrace(benchmark::State& state) {
  const SegmentResolvent r(SegmentModel::uniform(1.0, Potential::constant(0.0), 200), Energy(kI));
  const RadialSource h = RadialSource::gaussian(Point(0.5, 0.3, 0.0), 0.1);
  const double rho[] = {1e-2, 1e-3, 1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(log_boundary_trace(r, h, 0.5, rho));
}
BENCHMARK(BM_LogBoundaryTrace)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
