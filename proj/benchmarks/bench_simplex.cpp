#include <random>

#include <benchmark/benchmark.h>

#include "poolcascade/simplex.hpp"

namespace pc = poolcascade;

namespace {

// Random covering LP: min c.x subject to rows of random 0/1 coefficients >= 1.
pc::LinearProgram covering_lp(std::size_t vars, std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cost(1.0, 5.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(vars) - 1);
  pc::LinearProgram lp;
  for (std::size_t j = 0; j < vars; ++j) lp.add_variable(cost(rng));
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int t = 0; t < 4; ++t) terms.emplace_back(pick(rng), 1.0);
    lp.add_row(std::move(terms), pc::RowSense::greater_equal, 1.0);
  }
  return lp;
}

void BM_DenseSimplex(benchmark::State& state) {
  const auto vars = static_cast<std::size_t>(state.range(0));
  pc::LinearProgram lp = covering_lp(vars, vars / 2, 17);
  pc::DenseSimplex solver;
  for (auto _ : state) {
    auto r = solver.solve(lp);
    benchmark::DoNotOptimize(r.objective);
  }
}
BENCHMARK(BM_DenseSimplex)->Arg(50)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace
