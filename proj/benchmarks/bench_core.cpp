#include <benchmark/benchmark.h>

#include "lipkit/bpb.hpp"
#include "lipkit/counterexamples.hpp"
#include "lipkit/freespace.hpp"
#include "lipkit/lipfunc.hpp"
#include "lipkit/random.hpp"

#include <string>

namespace {

using namespace lipkit;

SpacePtr random_plane(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  GridBuilder b(NormedSpaceModel::lp(2, 2.0));
  b.add("0", {0.0, 0.0});
  while (b.size() < n) b.add("p" + std::to_string(b.size()), rng.normal_vector(2));
  return b.build();
}

LipFunctional random_functional(const SpacePtr& space, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(space->size());
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = rng.normal();
  LipFunctional f(space, v);
  return f.scaled(1.0 / lip_norm(f).norm);
}

void BM_LipNorm(benchmark::State& state) {
  const auto space = random_plane(static_cast<std::size_t>(state.range(0)), 1);
  const auto f = random_functional(space, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lip_norm(f).norm);
}
BENCHMARK(BM_LipNorm)->Arg(16)->Arg(64)->Arg(256);

void BM_FreeNorm(benchmark::State& state) {
  const auto space = random_plane(static_cast<std::size_t>(state.range(0)), 3);
  Rng rng(4);
  std::vector<double> c(space->size());
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = rng.normal();
  const FreeVector z(space, c);
  for (auto _ : state) benchmark::DoNotOptimize(free_norm(z).norm);
}
BENCHMARK(BM_FreeNorm)->Arg(6)->Arg(10)->Arg(16);

void BM_BpbCorrect(benchmark::State& state) {
  const auto space = random_plane(static_cast<std::size_t>(state.range(0)), 5);
  const auto f = random_functional(space, 6);
  // The best non-attaining pair, with delta just above its defect.
  std::size_t x = 0, y = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < space->size(); ++i)
    for (std::size_t j = 0; j < space->size(); ++j) {
      if (i == j) continue;
      const double q = f.quotient(i, j);
      if (q < 1.0 - 1e-9 && q > best) best = q, x = i, y = j;
    }
  const double delta = 1.0 - best + 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(bpb_correct(f, x, y, delta).dist_f);
}
BENCHMARK(BM_BpbCorrect)->Arg(6)->Arg(12)->Arg(24);

void BM_SvcSet(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(svc_set(depth).measure);
}
BENCHMARK(BM_SvcSet)->Arg(6)->Arg(10)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
