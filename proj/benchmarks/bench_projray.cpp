#include <benchmark/benchmark.h>

#include <vector>

#include "projray/components.hpp"
#include "projray/continuity.hpp"
#include "projray/covariance.hpp"
#include "projray/projective.hpp"
#include "projray/rng.hpp"
#include "projray/separation.hpp"

using namespace projray;

static void BM_RiemannianDistance(benchmark::State& state) {
  Rng rng(1);
  const Eigen::Index n = state.range(0);
  const Ray x(rng.gaussian_vector(n));
  const Ray y(rng.gaussian_vector(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(riemannian_distance(x, y));
  }
}
BENCHMARK(BM_RiemannianDistance)->Arg(4)->Arg(16)->Arg(64);

static void BM_ProjectorDistanceSvdOracle(benchmark::State& state) {
  // the closed form against which tests compare; timed here as the oracle
  Rng rng(2);
  const Eigen::Index n = state.range(0);
  const Matrix diff = projector(Ray(rng.gaussian_vector(n))) -
                      projector(Ray(rng.gaussian_vector(n)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Eigen::JacobiSVD<Matrix>(diff).singularValues().sum());
  }
}
BENCHMARK(BM_ProjectorDistanceSvdOracle)->Arg(4)->Arg(16);

static void BM_DyadicChain(benchmark::State& state) {
  Rng rng(3);
  const Ray x(rng.gaussian_vector(8));
  const Ray y(rng.gaussian_vector(8));
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dyadic_chain(x, y, depth));
  }
}
BENCHMARK(BM_DyadicChain)->Arg(4)->Arg(8);

static void BM_ProjectorSpanRank(benchmark::State& state) {
  Rng rng(4);
  const Eigen::Index n = state.range(0);
  std::vector<Vector> vs;
  for (Eigen::Index j = 0; j < 2 * n; ++j) {
    vs.push_back(rng.gaussian_vector(n));
  }
  const Frame frame(vs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(projector_span_rank(frame));
  }
}
BENCHMARK(BM_ProjectorSpanRank)->Arg(3)->Arg(8)->Arg(16);

static void BM_WitnessSearch(benchmark::State& state) {
  Rng rng(5);
  std::vector<Vector> vs;
  for (int j = 0; j < 3; ++j) vs.push_back(rng.gaussian_vector(2));
  const Frame frame(vs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_unresolved_pair(frame, 7));
  }
}
BENCHMARK(BM_WitnessSearch);

static void BM_IndecomposableComponents(benchmark::State& state) {
  Rng rng(6);
  const Eigen::Index n = state.range(0);
  std::vector<Ray> rays;
  for (Eigen::Index j = 0; j < 3 * n; ++j) {
    rays.emplace_back(rng.gaussian_vector(n));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(indecomposable_components(rays, 1e-8));
  }
}
BENCHMARK(BM_IndecomposableComponents)->Arg(4)->Arg(12);

static void BM_CommutantOfFullAlgebra(benchmark::State& state) {
  Rng rng(7);
  const Eigen::Index n = state.range(0);
  const CovariantInstance inst =
      random_covariant_instance(rng, {{static_cast<int>(n), 1}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutant_of_set(inst.generators, n));
  }
}
BENCHMARK(BM_CommutantOfFullAlgebra)->Arg(2)->Arg(3)->Arg(4);

static void BM_BorchersArvesonSplit(benchmark::State& state) {
  Rng rng(8);
  const CovariantInstance inst =
      random_covariant_instance(rng, {{2, 2}, {1, 3}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        borchers_arveson_split(inst.hamiltonian, inst.algebra));
  }
}
BENCHMARK(BM_BorchersArvesonSplit);

static void BM_ContinuityProbe(benchmark::State& state) {
  const BlockRepresentation rep({
      Block{2, BlockMode::Continuous, Rational(1)},
      Block{2, BlockMode::Twisted, Rational(1)},
  });
  Vector mixed = Vector::Zero(4);
  mixed(0) = 0.7071067811865476;
  mixed(2) = 0.7071067811865476;
  const Ray state_ray(mixed);
  const std::vector<NullSequence> sequences{
      adversarial_null_sequence(static_cast<int>(state.range(0))),
      tame_null_sequence(static_cast<int>(state.range(0)))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(orbit_continuity_probe(rep, state_ray, sequences));
  }
}
BENCHMARK(BM_ContinuityProbe)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
