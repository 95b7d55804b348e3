#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fbc/chains.hpp"
#include "fbc/homology.hpp"

using namespace fbc;

namespace {

  IntMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64                    rng(seed);
    std::uniform_int_distribution<int> entry(-20, 20);
    IntMatrix                          m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (auto v = entry(rng)) {
          m.add_to(i, j, Integer(v));
        }
      }
    }
    return m;
  }

  TriangularAutomorphism chain3() {
    return TriangularAutomorphism(3, {Word(3, {}), Word(3, {1}), Word(3, {2})});
  }

}  // namespace

static void BM_SnfDense(benchmark::State& state) {
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const m = random_matrix(n, n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smith_normal_form(m));
  }
}
BENCHMARK(BM_SnfDense)->Arg(10)->Arg(40)->Arg(80);

static void BM_SnfTransforms(benchmark::State& state) {
  auto const m = random_matrix(20, 20, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smith_normal_form(m, true));
  }
}
BENCHMARK(BM_SnfTransforms);

static void BM_RewriteAndAbelianize(benchmark::State& state) {
  auto const phi   = chain3();
  auto const p     = presentation(phi.automorphism());
  auto const chain = cyclic_chain(phi.automorphism(), static_cast<std::size_t>(state.range(0)));
  auto const& t    = chain.levels.back();
  for (auto _ : state) {
    auto s = rewrite_presentation(p, t);
    benchmark::DoNotOptimize(abelianized_relation_matrix(s));
  }
  state.SetLabel("index " + std::to_string(t.index()));
}
BENCHMARK(BM_RewriteAndAbelianize)->Arg(4)->Arg(6);

static void BM_ModPHomology(benchmark::State& state) {
  auto const phi   = chain3();
  std::vector<std::uint32_t> const primes{2, 3};
  auto const chain = mod_p_chain(phi, primes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient_series(phi.automorphism(), chain, 2));
  }
}
BENCHMARK(BM_ModPHomology)->Unit(benchmark::kMillisecond);

static void BM_LowIndex(benchmark::State& state) {
  auto const p = presentation(chain3().automorphism());
  for (auto _ : state) {
    benchmark::DoNotOptimize(low_index_subgroups(p, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_LowIndex)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Intersection(benchmark::State& state) {
  auto const p      = presentation(chain3().automorphism());
  auto const tables = low_index_subgroups(p, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(intersect_tables(tables));
  }
  state.SetLabel(std::to_string(tables.size()) + " tables");
}
BENCHMARK(BM_Intersection)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
