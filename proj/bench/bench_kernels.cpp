#include <benchmark/benchmark.h>

#include <random>

#include "ade/classify.hpp"
#include "ade/series.hpp"

using namespace ade;

namespace {

Series<Fp> dense_random(std::mt19937_64& rng, const PrimeField& K, int n, int N, int count) {
  std::vector<Term<Fp>> terms;
  std::uniform_int_distribution<int> var(0, n - 1), deg(0, N);
  for (int k = 0; k < count; ++k) {
    std::vector<int> e(n, 0);
    for (int d = deg(rng); d > 0; --d) ++e[var(rng)];
    terms.push_back({Monomial::from_exponents(e), K.random(rng)});
  }
  return Series<Fp>::from_terms(K, n, N, std::move(terms));
}

template <Series<Fp> (*Mul)(const Series<Fp>&, const Series<Fp>&)>
void BM_mul(benchmark::State& state) {
  PrimeField K(10007);
  std::mt19937_64 rng(1);
  int n = static_cast<int>(state.range(0)), N = static_cast<int>(state.range(1)), count = static_cast<int>(state.range(2));
  auto f = dense_random(rng, K, n, N, count), g = dense_random(rng, K, n, N, count);
  for (auto _ : state) benchmark::DoNotOptimize(Mul(f, g));
}

// disguised E7 rows in three variables, the acceptance workload
void BM_classify(benchmark::State& state) {
  PrimeField K(11);
  int N = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<Series<Fp>> inputs;
  auto nf = normal_form<Fp>(Verdict::of(VerdictKind::E7), K, 3, N);
  for (int i = 0; i < 8; ++i) {
    std::vector<Series<Fp>> change;
    for (int j = 0; j < 3; ++j) {
      std::vector<Term<Fp>> t{{Monomial::variable(j), K(1)}};
      for (int r = 0; r < 4; ++r) {
        std::vector<int> e(3, 0);
        e[rng() % 3] += 1;
        e[rng() % 3] += 1;
        t.push_back({Monomial::from_exponents(e), K.random(rng)});
      }
      change.push_back(Series<Fp>::from_terms(K, 3, N, std::move(t)));
    }
    inputs.push_back(substitute(nf, change));
  }
  for (auto _ : state)
    for (const auto& f : inputs) benchmark::DoNotOptimize(classify(f));
}

}  // namespace

// args: variables, precision, terms per factor
BENCHMARK_TEMPLATE(BM_mul, mul_serial<Fp>)->Args({3, 16, 400})->Args({4, 20, 400})->Args({5, 20, 3000})->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_mul, mul_parallel<Fp>)->Args({3, 16, 400})->Args({4, 20, 400})->Args({5, 20, 3000})->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_mul, mul_reference<Fp>)->Args({3, 16, 400})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_classify)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
