#include <random>

#include <benchmark/benchmark.h>

#include "grasspack/distance.hpp"
#include "grasspack/kernels.hpp"
#include "grasspack/packing.hpp"

namespace {

using namespace grasspack;

Subspace random_subspace(int m, int k, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd raw(m, k);
  for (Eigen::Index i = 0; i < raw.size(); ++i) raw.data()[i] = normal(gen);
  return orthonormalize(raw);
}

void BM_Distance(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto metric = static_cast<Metric>(state.range(2));
  std::mt19937_64 gen(1);
  const Subspace s = random_subspace(m, k, gen);
  const Subspace t = random_subspace(m, k, gen);
  for (auto _ : state) benchmark::DoNotOptimize(distance(s, t, metric));
}
BENCHMARK(BM_Distance)
    ->Args({9, 3, 0})
    ->Args({9, 3, 1})
    ->Args({49, 3, 0})
    ->Args({49, 3, 1});

void BM_ChordalFrobenius(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const Subspace s = random_subspace(49, 3, gen);
  const Subspace t = random_subspace(49, 3, gen);
  for (auto _ : state) benchmark::DoNotOptimize(chordal_frobenius(s, t));
}
BENCHMARK(BM_ChordalFrobenius);

void BM_PairwiseDistances(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::vector<Subspace> subspaces;
  for (int i = 0; i < state.range(0); ++i) subspaces.push_back(random_subspace(49, 3, gen));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(subspaces, Metric::Chordal));
}
BENCHMARK(BM_PairwiseDistances)->Arg(32)->Arg(64);

void BM_Optimize(benchmark::State& state) {
  PackingProblem p;
  p.m = 9;
  p.k = static_cast<int>(state.range(0));
  p.n = 32;
  p.metric = static_cast<Metric>(state.range(1));
  p.restarts = 1;
  p.max_iters = 200;
  p.seed = 1;
  p.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(p));
}
BENCHMARK(BM_Optimize)->Args({1, 0})->Args({3, 0})->Args({3, 1})->Unit(benchmark::kMillisecond);

void BM_ExportKernels(benchmark::State& state) {
  PackingProblem p;
  p.m = 49;
  p.k = 3;
  p.n = 64;
  p.metric = Metric::Chordal;
  p.seed = 1;
  const Codebook book = random_codebook(p);
  for (auto _ : state) benchmark::DoNotOptimize(export_kernels(book, {7, 7, ScaleMode::Kaiming}));
}
BENCHMARK(BM_ExportKernels);

}  // namespace

BENCHMARK_MAIN();
